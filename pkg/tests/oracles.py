"""Exhaustive reference implementations used to check the fast code paths.

Everything here loops over windows explicitly and recomputes each window
mean from the raw values; nothing is shared with the package internals.
"""
import math

E = math.e


def gamma(n, c):
    return math.sqrt(2.0 * math.log(n * E / c))


def window_mean(x, j, k):
    return sum(x[j:k]) / (k - j)


def windows(n, k0, c_min):
    for c in range(c_min, n - k0 + 1):
        for j in range(k0, n - c + 1):
            yield j, j + c


def statistic(x, k0, c_min, delta):
    """(value, j, k) maximizing the penalized score; ties to smallest c then j."""
    n = len(x)
    base = window_mean(x, 0, k0)
    best = None
    for j, k in windows(n, k0, c_min):
        c = k - j
        score = math.sqrt(c) * abs(base - window_mean(x, j, k)) - gamma(n, c) \
            - math.sqrt(c) * delta
        if best is None or score > best[0]:
            best = (score, j, k)
    return best


def extremal_sets(x, k0, c_min, sigma):
    """``{c: {(j, k): sign}}`` of near-maximal windows per scale."""
    n = len(x)
    base = window_mean(x, 0, k0)
    out = {}
    for c in range(c_min, n - k0 + 1):
        diffs = {(j, j + c): base - window_mean(x, j, j + c) for j in range(k0, n - c + 1)}
        top = max(abs(d) for d in diffs.values())
        cut = top - sigma * math.log(n) / math.sqrt(c)
        out[c] = {w: (1 if d >= 0 else -1) for w, d in diffs.items() if abs(d) >= cut}
    return out


def t_star_draw(path, k0, members, sigma):
    """Bootstrap statistic for one integer-time Brownian path ``B(0..n)``."""
    n = len(path) - 1
    best = -math.inf
    for c, sets in members.items():
        for (j, k), sign in sets.items():
            term = math.sqrt(c) * path[k0] / k0 - (path[k] - path[j]) / math.sqrt(c)
            best = max(best, sigma * (sign * term - gamma(n, c)))
    return best


def m_draw(path, step, i0, t0):
    """Gaussian bound for one grid path by looping over every grid pair."""
    last = len(path) - 1
    best = -math.inf
    for a in range(i0, last + 1):
        for b in range(a + 1, last + 1):
            h = (b - a) * step
            v = abs(math.sqrt(h) * path[i0] / t0 - (path[b] - path[a]) / math.sqrt(h))
            best = max(best, v - math.sqrt(2.0 * math.log(E / h)))
    return best


def locate(x, k0, c_min, delta, sigma):
    """(k, j) of the first qualifying window, or None."""
    n = len(x)
    base = window_mean(x, 0, k0)
    for k in range(k0 + c_min, n + 1):
        for j in range(k0, k - c_min + 1):
            slack = sigma * math.log(n) / math.sqrt(k - j)
            if abs(base - window_mean(x, j, k)) >= delta - slack:
                return k, j
    return None


def minimal_delta_bisect(x, k0, c_min, q, tol=1e-13):
    """Smallest delta with statistic < q, by bisection on the exhaustive statistic."""
    n = len(x)
    base = window_mean(x, 0, k0)
    terms = [(math.sqrt(k - j), abs(base - window_mean(x, j, k)), gamma(n, k - j))
             for j, k in windows(n, k0, c_min)]

    def stat(delta):
        return max(r * d - g - r * delta for r, d, g in terms)

    if stat(0.0) < q:
        return 0.0
    lo, hi = 0.0, 1.0
    while stat(hi) >= q:
        hi *= 2.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if stat(mid) >= q:
            lo = mid
        else:
            hi = mid
    return hi


def lrv(x, m):
    blocks = len(x) // m
    sums = [sum(x[i * m:(i + 1) * m]) for i in range(blocks)]
    return sum((sums[i + 1] - sums[i]) ** 2 for i in range(blocks - 1)) / (2 * m * (blocks - 1))
