"""Directional-energy features of a square binary word matrix.

Six length-N vectors are produced per word:

* f1: deviation of the principal diagonal, then of each upper diagonal
  (offsets 1..N-2), then a zero.
* f2: deviation of each lower diagonal (offsets 1..N-2), then two zeros.
* f3, f4: f1 and f2 of the left-right mirrored matrix.
* f5, f6: deviation of every row and of every column.

All deviations are sample standard deviations (n - 1 denominator). The two
single-element corner diagonals are not used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyVector, MatrixTooSmall, NonBinaryMatrix
from .imaging import flip_horizontal

FEATURE_NAMES = ("f1", "f2", "f3", "f4", "f5", "f6")


@dataclass(frozen=True)
class DiagonalSet:
    principal: np.ndarray
    upper: tuple[np.ndarray, ...]
    lower: tuple[np.ndarray, ...]

    def elements(self) -> np.ndarray:
        return np.concatenate([self.principal, *self.upper, *self.lower])


@dataclass(frozen=True)
class WordFeatures:
    """The six feature vectors of one word, stored as a ``(6, n)`` array."""

    vectors: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != 6:
            raise ValueError(f"expected a (6, n) array, got shape {v.shape}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    f1 = property(lambda self: self.vectors[0])
    f2 = property(lambda self: self.vectors[1])
    f3 = property(lambda self: self.vectors[2])
    f4 = property(lambda self: self.vectors[3])
    f5 = property(lambda self: self.vectors[4])
    f6 = property(lambda self: self.vectors[5])

    def __eq__(self, other):
        if not isinstance(other, WordFeatures):
            return NotImplemented
        return np.array_equal(self.vectors, other.vectors)

    __hash__ = None


def std_dev(v) -> float:
    v = np.asarray(v, dtype=np.float64).ravel()
    if v.size == 0:
        raise EmptyVector("standard deviation of an empty vector")
    if v.size == 1:
        return 0.0
    return float(np.std(v, ddof=1))


def _check_square(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 3:
        raise MatrixTooSmall(f"need N >= 3, got N = {a.shape[0]}")
    return a


def extract_diagonals(a) -> DiagonalSet:
    a = _check_square(a)
    n = a.shape[0]
    return DiagonalSet(
        principal=np.diagonal(a).copy(),
        upper=tuple(np.diagonal(a, offset=k).copy() for k in range(1, n - 1)),
        lower=tuple(np.diagonal(a, offset=-m).copy() for m in range(1, n - 1)),
    )


def _diagonal_stds(a: np.ndarray) -> np.ndarray:
    """Sample deviation of every diagonal, indexed by offset + N - 1.

    Sums are accumulated per diagonal in one pass rather than slicing each
    diagonal out. Squared deviations are taken from the diagonal mean, not
    via the sum-of-squares identity, to avoid cancellation.
    """
    n = a.shape[0]
    i, j = np.indices((n, n))
    key = (j - i + n - 1).ravel()
    vals = a.ravel()
    counts = np.bincount(key, minlength=2 * n - 1)
    means = np.bincount(key, weights=vals, minlength=2 * n - 1) / counts
    sq = np.bincount(key, weights=(vals - means[key]) ** 2, minlength=2 * n - 1)
    out = np.zeros(2 * n - 1)
    multi = counts > 1
    out[multi] = np.sqrt(sq[multi] / (counts[multi] - 1))
    return out


def diag_features(a) -> tuple[np.ndarray, np.ndarray]:
    a = _check_square(a)
    n = a.shape[0]
    stds = _diagonal_stds(a)
    upper = stds[n : 2 * n - 2]  # offsets 1..N-2
    lower = stds[n - 2 : 0 : -1]  # offsets -1..-(N-2)
    f1 = np.concatenate([[stds[n - 1]], upper, [0.0]])
    f2 = np.concatenate([lower, [0.0, 0.0]])
    return f1, f2


def row_col_features(a) -> tuple[np.ndarray, np.ndarray]:
    a = _check_square(a)
    return a.std(axis=1, ddof=1), a.std(axis=0, ddof=1)


def extract_word_features(a) -> WordFeatures:
    a = _check_square(a)
    if not np.all((a == 0) | (a == 1)):
        raise NonBinaryMatrix("feature extraction expects a {0,1} matrix")
    f1, f2 = diag_features(a)
    f3, f4 = diag_features(flip_horizontal(a))
    f5, f6 = row_col_features(a)
    return WordFeatures(np.stack([f1, f2, f3, f4, f5, f6]))
