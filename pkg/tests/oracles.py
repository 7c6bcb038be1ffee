"""Independent reference computations used as test oracles.

These deliberately avoid the package's code paths: plain loops, pure-Python
arithmetic and exact rationals instead of vectorized numpy.
"""

import math
from fractions import Fraction


def otsu_brute_force(pixels):
    """Exhaustive search over t = 0..255 on the raw pixel list.

    Class 0 is every pixel <= t. Between-class variance
    w0 * w1 * (mu0 - mu1)**2 is evaluated exactly with Fractions.
    """
    pixels = [int(p) for p in pixels]
    n = len(pixels)
    best_t, best_v = None, None
    for t in range(256):
        dark = [p for p in pixels if p <= t]
        light = [p for p in pixels if p > t]
        if not dark or not light:
            v = Fraction(0)
        else:
            w0 = Fraction(len(dark), n)
            w1 = Fraction(len(light), n)
            mu0 = Fraction(sum(dark), len(dark))
            mu1 = Fraction(sum(light), len(light))
            v = w0 * w1 * (mu0 - mu1) ** 2
        if best_v is None or v > best_v:
            best_t, best_v = t, v
    return best_t


def sample_std(values):
    values = [float(v) for v in values]
    n = len(values)
    if n == 1:
        return 0.0
    mean = math.fsum(values) / n
    return math.sqrt(math.fsum((v - mean) ** 2 for v in values) / (n - 1))


def diagonals_by_loops(a):
    """(principal, {offset: diagonal}) via explicit index loops; corners excluded."""
    n = len(a)
    principal = [a[i][i] for i in range(n)]
    upper = {k: [a[i][i + k] for i in range(n - k)] for k in range(1, n - 1)}
    lower = {m: [a[i + m][i] for i in range(n - m)] for m in range(1, n - 1)}
    return principal, upper, lower


def word_features_by_loops(a):
    """The six feature vectors of a square list-of-lists matrix, from first principles."""
    n = len(a)

    def f12(mat):
        principal, upper, lower = diagonals_by_loops(mat)
        f1 = [sample_std(principal)] + [sample_std(upper[k]) for k in range(1, n - 1)] + [0.0]
        f2 = [sample_std(lower[m]) for m in range(1, n - 1)] + [0.0, 0.0]
        return f1, f2

    flipped = [list(reversed(row)) for row in a]
    f1, f2 = f12(a)
    f3, f4 = f12(flipped)
    f5 = [sample_std(row) for row in a]
    f6 = [sample_std([a[i][j] for i in range(n)]) for j in range(n)]
    return [f1, f2, f3, f4, f5, f6]


def gaussian_mixture_density(y, weights, means, variances):
    """p(y) = sum_i w_i prod_d N(y_d; mu_id, var_id), evaluated directly."""
    total = 0.0
    for w, mu, var in zip(weights, means, variances):
        dens = 1.0
        for yd, md, vd in zip(y, mu, var):
            dens *= math.exp(-0.5 * (yd - md) ** 2 / vd) / math.sqrt(2 * math.pi * vd)
        total += w * dens
    return total


def single_gaussian_mle(rows, floor):
    """Closed-form mean and floored population variance per dimension."""
    t = len(rows)
    d = len(rows[0])
    mean = [math.fsum(r[j] for r in rows) / t for j in range(d)]
    var = [max(math.fsum((r[j] - mean[j]) ** 2 for r in rows) / t, floor) for j in range(d)]
    return mean, var
