"""Run configuration shared by the CLI and the experiment scripts."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .gmm import VARIANCE_FLOOR

DEFAULT_ORDERS = (2, 4, 8, 16, 32, 64, 128)


@dataclass(frozen=True)
class RunConfig:
    side: int = 64
    order: int = 128
    seed: int = 42
    rel_tol: float = 1e-6
    max_iter: int = 200
    variance_floor: float = VARIANCE_FLOOR
    data: Path | None = None
    model: Path | None = None
    out: Path | None = None
    manifest: Path | None = None

    def __post_init__(self):
        if self.side < 8:
            raise ValueError(f"side must be >= 8, got {self.side}")
        if self.order < 1:
            raise ValueError(f"order must be >= 1, got {self.order}")
        if not self.variance_floor > 0:
            raise ValueError("variance_floor must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")

    def fit_kwargs(self) -> dict:
        return {"max_iter": self.max_iter, "rel_tol": self.rel_tol, "variance_floor": self.variance_floor}
