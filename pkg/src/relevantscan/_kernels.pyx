# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan kernels; same contracts as ``_fallback``.

Floating-point expressions are written in the same order as the numpy
versions and the extension is built with ``-ffp-contract=off`` so both
backends agree bit for bit.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, log, fabs, INFINITY

cnp.import_array()

NAME = "cython"

cdef double E = 2.718281828459045


cdef inline double _penalty(long n, long c) nogil:
    return sqrt(2.0 * log(<double>n * E / <double>c))


def penalty(n, c):
    return _penalty(n, c)


def scan_max(sums, long k0, long c_min, double delta):
    cdef const double[::1] s = np.ascontiguousarray(sums, dtype=np.float64)
    cdef long n = s.shape[0] - 1
    cdef double base = (s[k0] - s[0]) / k0
    cdef double best = -INFINITY, sc, g, v, mean
    cdef long best_j = -1, best_c = -1, c, j
    with nogil:
        for c in range(c_min, n - k0 + 1):
            sc = sqrt(<double>c)
            g = _penalty(n, c)
            for j in range(k0, n - c + 1):
                mean = (s[j + c] - s[j]) / c
                v = sc * fabs(base - mean) - g - sc * delta
                if v > best:
                    best = v
                    best_j = j
                    best_c = c
    return best, best_j, best_c


def min_delta_scan(sums, long k0, long c_min, double q):
    cdef const double[::1] s = np.ascontiguousarray(sums, dtype=np.float64)
    cdef long n = s.shape[0] - 1
    cdef double base = (s[k0] - s[0]) / k0
    cdef double best = -INFINITY, slack, top, d, mean
    cdef long c, j
    with nogil:
        for c in range(c_min, n - k0 + 1):
            slack = (_penalty(n, c) + q) / sqrt(<double>c)
            top = -INFINITY
            for j in range(k0, n - c + 1):
                mean = (s[j + c] - s[j]) / c
                d = fabs(base - mean)
                if d > top:
                    top = d
            if top - slack > best:
                best = top - slack
    return best


def locate_first(sums, long k0, long c_min, double delta, double slack):
    cdef const double[::1] s = np.ascontiguousarray(sums, dtype=np.float64)
    cdef long n = s.shape[0] - 1
    cdef double base = (s[k0] - s[0]) / k0
    cdef double width, mean
    cdef long k, j
    with nogil:
        for k in range(k0 + c_min, n + 1):
            for j in range(k0, k - c_min + 1):
                width = <double>(k - j)
                mean = (s[k] - s[j]) / width
                if fabs(base - mean) >= delta - slack / sqrt(width):
                    with gil:
                        return k, j
    return -1, -1


def draws_t_star(paths, long k0, run_c, run_start, run_stop, run_sign, double sigma):
    cdef const double[:, ::1] p = np.ascontiguousarray(paths, dtype=np.float64)
    cdef const long[::1] rc = np.ascontiguousarray(run_c, dtype=np.int64)
    cdef const long[::1] rlo = np.ascontiguousarray(run_start, dtype=np.int64)
    cdef const long[::1] rhi = np.ascontiguousarray(run_stop, dtype=np.int64)
    cdef const double[::1] rsg = np.ascontiguousarray(run_sign, dtype=np.float64)
    cdef long reps = p.shape[0], n = p.shape[1] - 1, nruns = rc.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(reps)
    cdef double[::1] o = out
    cdef long r, u, j, c
    cdef double best, anchor, sc, g, ext, incr, v
    if nruns == 0:
        return out
    with nogil:
        for r in range(reps):
            best = -INFINITY
            anchor = p[r, k0] / k0
            for u in range(nruns):
                c = rc[u]
                sc = sqrt(<double>c)
                g = _penalty(n, c)
                if rsg[u] > 0:
                    ext = INFINITY
                    for j in range(rlo[u], rhi[u]):
                        incr = p[r, j + c] - p[r, j]
                        if incr < ext:
                            ext = incr
                else:
                    ext = -INFINITY
                    for j in range(rlo[u], rhi[u]):
                        incr = p[r, j + c] - p[r, j]
                        if incr > ext:
                            ext = incr
                v = rsg[u] * (sc * anchor - ext / sc) - g
                if v > best:
                    best = v
            o[r] = sigma * best
    return out


def draws_m(paths, long i0, double step, double t0):
    cdef const double[:, ::1] p = np.ascontiguousarray(paths, dtype=np.float64)
    cdef long reps = p.shape[0], last = p.shape[1] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(reps)
    cdef double[::1] o = out
    cdef long r, lag, s
    cdef double best, anchor, h, sh, g, lo, hi, incr, a, v, w
    with nogil:
        for r in range(reps):
            best = -INFINITY
            anchor = p[r, i0] / t0
            for lag in range(1, last - i0 + 1):
                h = lag * step
                sh = sqrt(h)
                g = sqrt(2.0 * log(E / h))
                lo = INFINITY
                hi = -INFINITY
                for s in range(i0, last - lag + 1):
                    incr = p[r, s + lag] - p[r, s]
                    if incr < lo:
                        lo = incr
                    if incr > hi:
                        hi = incr
                a = sh * anchor
                v = a - lo / sh
                w = hi / sh - a
                if w > v:
                    v = w
                v = v - g
                if v > best:
                    best = v
            o[r] = best
    return out
