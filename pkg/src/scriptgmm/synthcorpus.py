"""Synthetic word images built from oriented strokes.

Each class is a mixture over four stroke orientations. Images are
rasterized on a square canvas, ink = 1, and are fully determined by
``(spec, side, count, seed)``.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec
from .imaging import BinaryImage

ORIENTATIONS = ("horizontal", "vertical", "right_diagonal", "left_diagonal")

MAX_REJECTS = 1000

# unit steps as (d_row, d_col); right diagonal rises to the right ("/")
_DIRECTIONS = {
    "horizontal": (0.0, 1.0),
    "vertical": (1.0, 0.0),
    "right_diagonal": (-np.sqrt(0.5), np.sqrt(0.5)),
    "left_diagonal": (np.sqrt(0.5), np.sqrt(0.5)),
}


@dataclass(frozen=True)
class SynthClassSpec:
    label: str
    orientation_mix: tuple[float, float, float, float]  # same order as ORIENTATIONS
    strokes_per_image: tuple[int, int] = (5, 12)
    stroke_length: tuple[float, float] = (0.4, 0.9)
    thickness: int = 2

    def validate(self) -> None:
        mix = np.asarray(self.orientation_mix, dtype=np.float64)
        if not self.label:
            raise InvalidSpec("label must be non-empty")
        if mix.shape != (4,) or np.any(mix < 0) or abs(mix.sum() - 1.0) > 1e-9:
            raise InvalidSpec(f"{self.label}: orientation_mix must be 4 non-negative weights summing to 1")
        lo, hi = self.strokes_per_image
        if lo < 1 or hi < lo:
            raise InvalidSpec(f"{self.label}: bad strokes_per_image range {self.strokes_per_image}")
        lo, hi = self.stroke_length
        if not 0 < lo <= hi <= 1.5:
            raise InvalidSpec(f"{self.label}: bad stroke_length range {self.stroke_length}")
        if self.thickness < 1:
            raise InvalidSpec(f"{self.label}: thickness must be >= 1")


def _draw_stroke(canvas, rng, orientation, length, thickness):
    side = canvas.shape[0]
    dr, dc = _DIRECTIONS[orientation]
    r0, c0 = rng.uniform(0, side, size=2)
    steps = np.arange(0.0, length, 0.5)
    rows = np.floor(r0 + (steps - length / 2) * dr).astype(int)
    cols = np.floor(c0 + (steps - length / 2) * dc).astype(int)
    offsets = np.arange(thickness)
    rr = (rows[:, None, None] + offsets[None, :, None]).repeat(thickness, axis=2).ravel()
    cc = (cols[:, None, None] + offsets[None, None, :]).repeat(thickness, axis=1).ravel()
    keep = (rr >= 0) & (rr < side) & (cc >= 0) & (cc < side)
    canvas[rr[keep], cc[keep]] = 1


def _render(spec: SynthClassSpec, side: int, rng: np.random.Generator) -> np.ndarray:
    mix = np.asarray(spec.orientation_mix, dtype=np.float64)
    canvas = np.zeros((side, side), dtype=np.uint8)
    lo, hi = spec.strokes_per_image
    for _ in range(int(rng.integers(lo, hi + 1))):
        orientation = ORIENTATIONS[int(rng.choice(4, p=mix))]
        length = rng.uniform(*spec.stroke_length) * side
        _draw_stroke(canvas, rng, orientation, length, spec.thickness)
    return canvas


def generate(spec: SynthClassSpec, side: int, count: int, seed: int) -> list[BinaryImage]:
    if side < 8:
        raise InvalidSpec(f"side must be >= 8, got {side}")
    if count < 1:
        raise InvalidSpec(f"count must be >= 1, got {count}")
    spec.validate()
    # the label enters the stream so classes drawn with one seed stay independent
    rng = np.random.default_rng([seed, zlib.crc32(spec.label.encode("utf-8"))])
    images = []
    rejected = 0
    while len(images) < count:
        canvas = _render(spec, side, rng)
        if canvas.min() == canvas.max():
            rejected += 1
            if rejected > MAX_REJECTS:
                raise InvalidSpec(f"{spec.label}: spec keeps producing blank or fully inked images at side {side}")
            continue
        images.append(BinaryImage(canvas))
    return images


def default_four_class() -> list[SynthClassSpec]:
    specs = []
    for i, orientation in enumerate(ORIENTATIONS):
        mix = [0.1] * 4
        mix[i] = 0.7
        specs.append(SynthClassSpec(label=orientation, orientation_mix=tuple(mix)))
    return specs
