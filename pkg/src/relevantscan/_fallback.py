"""Pure numpy versions of the scan kernels.

Every function here mirrors ``_kernels.pyx`` operation for operation so that
both backends return bit-identical floats. Loops run over scales in Python and
over window positions (and replications) in numpy.
"""
import math

import numpy as np

NAME = "python"


def penalty(n, c):
    return math.sqrt(2.0 * math.log(n * math.e / c))


def scan_max(sums, k0, c_min, delta):
    """Max of the penalized score over scales ``c_min..n-k0``.

    Returns ``(value, j, c)``; ties go to the smallest ``c``, then ``j``.
    """
    sums = np.asarray(sums, dtype=float)
    n = sums.size - 1
    base = (sums[k0] - sums[0]) / k0
    best, best_j, best_c = -math.inf, -1, -1
    for c in range(c_min, n - k0 + 1):
        sc = math.sqrt(c)
        g = penalty(n, c)
        means = (sums[k0 + c:] - sums[k0:n - c + 1]) / c
        score = sc * np.abs(base - means) - g - sc * delta
        i = int(np.argmax(score))
        if score[i] > best:
            best, best_j, best_c = float(score[i]), k0 + i, c
    return best, best_j, best_c


def min_delta_scan(sums, k0, c_min, q):
    """Largest ``|base - mean_j^k| - (penalty + q) / sqrt(c)`` over all windows."""
    sums = np.asarray(sums, dtype=float)
    n = sums.size - 1
    base = (sums[k0] - sums[0]) / k0
    best = -math.inf
    for c in range(c_min, n - k0 + 1):
        sc = math.sqrt(c)
        slack = (penalty(n, c) + q) / sc
        means = (sums[k0 + c:] - sums[k0:n - c + 1]) / c
        v = float(np.max(np.abs(base - means))) - slack
        if v > best:
            best = v
    return best


def locate_first(sums, k0, c_min, delta, slack):
    """First ``k`` (then smallest ``j``) with ``|base - mean_j^k| >= delta - slack/sqrt(k-j)``.

    Returns ``(k, j)`` or ``(-1, -1)``.
    """
    sums = np.asarray(sums, dtype=float)
    n = sums.size - 1
    base = (sums[k0] - sums[0]) / k0
    for k in range(k0 + c_min, n + 1):
        j = np.arange(k0, k - c_min + 1)
        width = (k - j).astype(float)
        means = (sums[k] - sums[j]) / width
        hit = np.abs(base - means) >= delta - slack / np.sqrt(width)
        if hit.any():
            return k, k0 + int(np.argmax(hit))
    return -1, -1


def draws_t_star(paths, k0, run_c, run_start, run_stop, run_sign, sigma):
    """Bootstrap statistic for each row of ``paths`` (Brownian motion at 0..n)."""
    paths = np.asarray(paths, dtype=float)
    reps, width = paths.shape
    n = width - 1
    if len(run_c) == 0:
        return np.zeros(reps)
    best = np.full(reps, -math.inf)
    anchor = paths[:, k0] / k0
    for c, lo, hi, sgn in zip(run_c, run_start, run_stop, run_sign):
        c, lo, hi = int(c), int(lo), int(hi)
        sc = math.sqrt(c)
        g = penalty(n, c)
        incr = paths[:, lo + c:hi + c] - paths[:, lo:hi]
        ext = incr.min(axis=1) if sgn > 0 else incr.max(axis=1)
        v = float(sgn) * (sc * anchor - ext / sc) - g
        np.maximum(best, v, out=best)
    return sigma * best


def draws_m(paths, i0, step, t0):
    """Grid supremum of the Gaussian bound for each row of ``paths``."""
    paths = np.asarray(paths, dtype=float)
    reps, width = paths.shape
    last = width - 1
    best = np.full(reps, -math.inf)
    anchor = paths[:, i0] / t0
    for lag in range(1, last - i0 + 1):
        h = lag * step
        sh = math.sqrt(h)
        g = math.sqrt(2.0 * math.log(math.e / h))
        incr = paths[:, i0 + lag:] - paths[:, i0:width - lag]
        a = sh * anchor
        lo = incr.min(axis=1) / sh
        hi = incr.max(axis=1) / sh
        v = np.maximum(a - lo, hi - a) - g
        np.maximum(best, v, out=best)
    return best
