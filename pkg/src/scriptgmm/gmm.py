"""Diagonal-covariance Gaussian mixture: density, k-means++ seeding and EM.

All likelihood arithmetic stays in the natural-log domain. A component is
parameterized by a weight, a mean vector and a vector of per-dimension
variances; variances are never allowed below ``variance_floor``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp

from .errors import (
    DimensionMismatch,
    EmptyData,
    EmptyFrames,
    ModelFormatError,
    TooFewPoints,
)

FORMAT_VERSION = 1
VARIANCE_FLOOR = 1e-4
# Components whose responsibility mass drops below this are starved.
RESCUE_MASS = 1e-10
_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class GmmModel:
    weights: np.ndarray  # (M,)
    means: np.ndarray  # (M, D)
    variances: np.ndarray  # (M, D)

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64).ravel()
        mu = np.array(self.means, dtype=np.float64, ndmin=2)
        var = np.array(self.variances, dtype=np.float64, ndmin=2)
        if mu.ndim != 2 or var.shape != mu.shape or w.shape[0] != mu.shape[0]:
            raise DimensionMismatch(
                f"inconsistent shapes: weights {w.shape}, means {mu.shape}, variances {var.shape}"
            )
        if w.size < 1:
            raise ValueError("a mixture needs at least one component")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-9:
            raise ValueError(f"weights must be non-negative and sum to 1 (sum = {w.sum()!r})")
        if not np.all(var > 0) or not np.all(np.isfinite(var)):
            raise ValueError("variances must be positive and finite")
        if not np.all(np.isfinite(mu)):
            raise ValueError("means must be finite")
        for arr in (w, mu, var):
            arr.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "means", mu)
        object.__setattr__(self, "variances", var)

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.means.shape[1]

    def to_dict(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "dim": self.dim,
            "order": self.m,
            "weights": self.weights.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GmmModel":
        if not isinstance(doc, dict):
            raise ModelFormatError("model document must be a JSON object")
        if doc.get("format_version") != FORMAT_VERSION:
            raise ModelFormatError(f"unknown format_version {doc.get('format_version')!r}")
        try:
            model = cls(doc["weights"], doc["means"], doc["variances"])
        except KeyError as exc:
            raise ModelFormatError(f"missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ModelFormatError(str(exc)) from None
        if model.dim != doc.get("dim") or model.m != doc.get("order"):
            raise ModelFormatError("dim/order fields disagree with parameter arrays")
        return model

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "GmmModel":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ModelFormatError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)

    def __eq__(self, other):
        if not isinstance(other, GmmModel):
            return NotImplemented
        return (
            np.array_equal(self.weights, other.weights)
            and np.array_equal(self.means, other.means)
            and np.array_equal(self.variances, other.variances)
        )

    __hash__ = None


@dataclass(frozen=True)
class FitReport:
    iterations: int
    log_likelihood_trace: tuple[float, ...]
    converged: bool
    rescues: int = 0
    notes: tuple[str, ...] = field(default=())


def _as_frames(data, dim: int | None = None) -> np.ndarray:
    x = np.asarray(data, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :] if dim is not None and x.shape[0] == dim else x[:, None]
    if x.ndim != 2:
        raise DimensionMismatch(f"expected a (T, D) array of frames, got shape {x.shape}")
    if dim is not None and x.shape[1] != dim:
        raise DimensionMismatch(f"frame dimension {x.shape[1]} != model dimension {dim}")
    return x


def _component_log_terms(x, weights, means, variances) -> np.ndarray:
    """``log w_i + log b_i(y_t)`` for every frame t and component i, shape (T, M)."""
    t, d = x.shape
    m = weights.shape[0]
    with np.errstate(divide="ignore"):
        log_w = np.log(weights)
    const = -0.5 * (d * _LOG_2PI + np.log(variances).sum(axis=1))
    out = np.empty((t, m))
    for i in range(m):
        diff = x - means[i]
        out[:, i] = log_w[i] + const[i] - 0.5 * np.sum(diff * diff / variances[i], axis=1)
    return out


def log_densities(model: GmmModel, frames) -> np.ndarray:
    x = _as_frames(frames, model.dim)
    return logsumexp(_component_log_terms(x, model.weights, model.means, model.variances), axis=1)


def log_density(model: GmmModel, y) -> float:
    y = np.asarray(y, dtype=np.float64).ravel()
    if y.shape[0] != model.dim:
        raise DimensionMismatch(f"vector length {y.shape[0]} != model dimension {model.dim}")
    return float(log_densities(model, y[None, :])[0])


def avg_log_likelihood(model: GmmModel, frames) -> float:
    x = np.asarray(frames, dtype=np.float64)
    if x.size == 0:
        raise EmptyFrames("cannot score an empty frame sequence")
    return float(np.mean(log_densities(model, _as_frames(x, model.dim))))


# --------------------------------------------------------------------------
# Initialization


def _kmeanspp_seeds(x: np.ndarray, m: int, rng: np.random.Generator) -> np.ndarray:
    t = x.shape[0]
    chosen = [int(rng.integers(t))]
    d2 = np.sum((x - x[chosen[0]]) ** 2, axis=1)
    for _ in range(1, m):
        total = d2.sum()
        if total > 0:
            idx = int(rng.choice(t, p=d2 / total))
        else:
            # fewer distinct points than clusters: fall back to unused indices
            free = np.setdiff1d(np.arange(t), chosen)
            idx = int(rng.choice(free))
        chosen.append(idx)
        d2 = np.minimum(d2, np.sum((x - x[idx]) ** 2, axis=1))
    return x[chosen].copy()


def _assign(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    d2 = np.empty((x.shape[0], centroids.shape[0]))
    for i, c in enumerate(centroids):
        d2[:, i] = np.sum((x - c) ** 2, axis=1)
    return np.argmin(d2, axis=1)


def kmeans_init(
    data,
    m: int,
    seed: int,
    variance_floor: float = VARIANCE_FLOOR,
    max_iter: int = 100,
) -> GmmModel:
    """k-means++ seeding followed by Lloyd iterations, packaged as a GMM."""
    x = _as_frames(data)
    t, d = x.shape
    if t == 0:
        raise EmptyData("no data points")
    if m < 1 or t < m:
        raise TooFewPoints(f"need at least {m} points for {m} clusters, got {t}")
    rng = np.random.default_rng(seed)
    centroids = _kmeanspp_seeds(x, m, rng)
    labels = _assign(x, centroids)
    for _ in range(max_iter):
        for i in range(m):
            members = labels == i
            if members.any():
                centroids[i] = x[members].mean(axis=0)
        new_labels = _assign(x, centroids)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels

    global_var = np.maximum(x.var(axis=0), variance_floor)
    counts = np.bincount(labels, minlength=m).astype(np.float64)
    variances = np.empty((m, d))
    for i in range(m):
        members = labels == i
        if members.any():
            variances[i] = np.maximum(x[members].var(axis=0), variance_floor)
        else:
            variances[i] = global_var
    return GmmModel(counts / t, centroids, variances)


# --------------------------------------------------------------------------
# EM


def _e_step(x, weights, means, variances) -> tuple[float, np.ndarray, np.ndarray]:
    terms = _component_log_terms(x, weights, means, variances)
    per_frame = logsumexp(terms, axis=1)
    return float(np.sum(per_frame)), terms - per_frame[:, None], per_frame


def _m_step(x, log_resp, means, variances, variance_floor):
    resp = np.exp(log_resp)
    mass = resp.sum(axis=0)
    new_means = means.copy()
    new_vars = variances.copy()
    for i in np.flatnonzero(mass >= RESCUE_MASS):
        r = resp[:, i]
        mu = r @ x / mass[i]
        diff = x - mu
        new_means[i] = mu
        new_vars[i] = np.maximum(r @ (diff * diff) / mass[i], variance_floor)
    weights = mass / mass.sum()
    return weights, new_means, new_vars, mass


def _rescue(x, per_frame, weights, means, variances, starved, variance_floor):
    """Move starved components onto the worst-explained frames."""
    t = x.shape[0]
    global_var = np.maximum(x.var(axis=0), variance_floor)
    worst = np.argsort(per_frame, kind="stable")
    weights = weights.copy()
    means = means.copy()
    variances = variances.copy()
    for rank, i in enumerate(np.flatnonzero(starved)):
        means[i] = x[worst[rank % t]]
        variances[i] = global_var
        weights[i] = 1.0 / t
    return weights / weights.sum(), means, variances


def em_fit(
    data,
    init: GmmModel,
    max_iter: int = 200,
    rel_tol: float = 1e-6,
    variance_floor: float = VARIANCE_FLOOR,
) -> tuple[GmmModel, FitReport]:
    """Maximum-likelihood refinement of ``init`` by expectation-maximization.

    Stops when the relative improvement of the total log-likelihood falls
    below ``rel_tol`` or after ``max_iter`` iterations. The returned trace
    holds the total log-likelihood of the initial model followed by one entry
    per iteration.

    Starved components (responsibility mass below ``RESCUE_MASS``) are moved
    onto the worst-explained frames with weight ``1/T``; the move is kept
    only if it does not lower the total log-likelihood, so the trace stays
    non-decreasing.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.size == 0:
        raise EmptyData("em_fit needs at least one frame")
    x = _as_frames(x, init.dim)

    weights, means = init.weights.copy(), init.means.copy()
    variances = np.maximum(init.variances, variance_floor)
    ll, log_resp, per_frame = _e_step(x, weights, means, variances)
    trace = [ll]
    converged = False
    rescues = 0
    it = 0
    for it in range(1, max_iter + 1):
        weights, means, variances, mass = _m_step(x, log_resp, means, variances, variance_floor)
        new_ll, log_resp, per_frame = _e_step(x, weights, means, variances)
        starved = mass < RESCUE_MASS
        if starved.any() and starved.sum() < len(mass):
            cand = _rescue(x, per_frame, weights, means, variances, starved, variance_floor)
            cand_ll, cand_resp, cand_frame = _e_step(x, *cand)
            if cand_ll >= new_ll:
                weights, means, variances = cand
                new_ll, log_resp, per_frame = cand_ll, cand_resp, cand_frame
                rescues += int(starved.sum())
        trace.append(new_ll)
        gain = new_ll - ll
        ll = new_ll
        if gain <= rel_tol * max(abs(trace[-2]), 1e-300):
            converged = True
            break

    model = GmmModel(weights, means, variances)
    return model, FitReport(it, tuple(trace), converged, rescues)
