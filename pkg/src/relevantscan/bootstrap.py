"""Estimated extremal sets and the plug-in bootstrap statistic."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .gaussian import QuantileTable, fresh_seed, replication_rngs
from .lrv import DegenerateVarianceError
from .series import BaselineSpec, PrefixSums
from .statistic import check_scale_range

BOOTSTRAP_REPLICATIONS = 200


@dataclass(frozen=True)
class ExtremalSetFamily:
    """Per-scale near-maximal windows, stored as runs of consecutive starts.

    Run ``u`` covers the windows ``(j, j + run_c[u])`` for
    ``run_start[u] <= j < run_stop[u]``, all sharing the sign ``run_sign[u]``
    of ``base - mean``. ``d_max[c - c_min]`` is the scale's largest absolute
    deviation.
    """

    n: int
    k0: int
    c_min: int
    d_max: np.ndarray
    run_c: np.ndarray
    run_start: np.ndarray
    run_stop: np.ndarray
    run_sign: np.ndarray

    @property
    def scales(self) -> range:
        return range(self.c_min, self.n - self.k0 + 1)

    @property
    def size(self) -> int:
        return int(np.sum(self.run_stop - self.run_start))

    def members(self, c: int) -> dict[tuple[int, int], int]:
        """Member windows of scale ``c`` mapped to their signs."""
        out = {}
        for u in np.flatnonzero(self.run_c == c):
            for j in range(self.run_start[u], self.run_stop[u]):
                out[(int(j), int(j + c))] = int(self.run_sign[u])
        return out

    def all_members(self) -> dict[tuple[int, int], int]:
        out = {}
        for c in self.scales:
            out.update(self.members(c))
        return out

    def restrict(self, keep: np.ndarray) -> "ExtremalSetFamily":
        """Family keeping only the runs selected by the boolean mask ``keep``."""
        return ExtremalSetFamily(self.n, self.k0, self.c_min, self.d_max,
                                 self.run_c[keep], self.run_start[keep],
                                 self.run_stop[keep], self.run_sign[keep])


def _runs(codes):
    """Maximal runs of equal nonzero codes: ``(start, stop, code)`` arrays."""
    edges = np.flatnonzero(np.diff(codes)) + 1
    starts = np.concatenate(([0], edges))
    stops = np.concatenate((edges, [codes.size]))
    vals = codes[starts]
    keep = vals != 0
    return starts[keep], stops[keep], vals[keep]


def estimate_extremal_sets(prefix: PrefixSums, spec: BaselineSpec, c_min: int,
                           sigma_hat: float) -> ExtremalSetFamily:
    """Windows within ``sigma_hat log(n) / sqrt(c)`` of each scale's largest deviation."""
    if not sigma_hat > 0:
        raise DegenerateVarianceError("degenerate variance: sigma_hat must be positive")
    check_scale_range(spec, c_min)
    s = prefix.sums
    n, k0 = prefix.n, spec.k0
    base = (s[k0] - s[0]) / k0
    log_n = math.log(n)
    d_max = []
    parts = ([], [], [], [])
    for c in range(c_min, n - k0 + 1):
        diff = base - (s[k0 + c:] - s[k0:n - c + 1]) / c
        dev = np.abs(diff)
        top = float(dev.max())
        d_max.append(top)
        member = dev >= top - sigma_hat * log_n / math.sqrt(c)
        codes = np.where(diff >= 0, 1, -1) * member
        lo, hi, sgn = _runs(codes)
        parts[0].append(np.full(lo.size, c))
        parts[1].append(lo + k0)
        parts[2].append(hi + k0)
        parts[3].append(sgn)
    run_c, run_start, run_stop, run_sign = (
        np.concatenate(p).astype(np.int64) for p in parts)
    return ExtremalSetFamily(n, k0, c_min, np.array(d_max), run_c, run_start,
                             run_stop, run_sign.astype(float))


def integer_brownian(n: int, rng) -> np.ndarray:
    """``B(0..n)`` with unit-variance increments."""
    path = np.zeros(n + 1)
    np.cumsum(rng.standard_normal(n), out=path[1:])
    return path


def draw_T_star(family: ExtremalSetFamily, spec: BaselineSpec, n: int,
                sigma_hat: float, rng) -> float:
    """One draw of the bootstrap statistic over the family's windows."""
    if not sigma_hat > 0:
        raise DegenerateVarianceError("degenerate variance: sigma_hat must be positive")
    path = integer_brownian(n, rng)
    return float(_backend.kernels.draws_t_star(
        path[None, :], spec.k0, family.run_c, family.run_start, family.run_stop,
        family.run_sign, sigma_hat)[0])


def build_bootstrap_quantile_table(family: ExtremalSetFamily, spec: BaselineSpec,
                                   n: int, sigma_hat: float,
                                   replications: int = BOOTSTRAP_REPLICATIONS,
                                   seed=None) -> QuantileTable:
    if replications < 50:
        raise ValueError(f"need at least 50 replications, got {replications}")
    if not sigma_hat > 0:
        raise DegenerateVarianceError("degenerate variance: sigma_hat must be positive")
    if seed is None:
        seed = fresh_seed()
    paths = np.empty((replications, n + 1))
    for r, rng in enumerate(replication_rngs(seed, replications)):
        paths[r] = integer_brownian(n, rng)
    draws = _backend.kernels.draws_t_star(
        paths, spec.k0, family.run_c, family.run_start, family.run_stop,
        family.run_sign, sigma_hat)
    return QuantileTable(draws, "bootstrap", seed)
