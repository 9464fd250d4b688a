"""Penalized multiscale statistic over all windows after the baseline."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import _backend
from .series import BaselineSpec, InvalidSeriesError, PrefixSums


@dataclass(frozen=True)
class ScaleWindow:
    j: int
    k: int

    @property
    def c(self) -> int:
        return self.k - self.j


@dataclass(frozen=True)
class StatisticResult:
    value: float
    argmax: ScaleWindow
    signed_diff_at_argmax: float


def penalty(n: int, c: int) -> float:
    """Scale penalty ``sqrt(2 log(n e / c))``; equals ``sqrt(2)`` at ``c = n``."""
    if not 1 <= c <= n:
        raise ValueError(f"scale c={c} outside [1, n={n}]")
    return _backend.kernels.penalty(n, c)


def check_scale_range(spec: BaselineSpec, c_min: int) -> None:
    if c_min < 1:
        raise ValueError(f"c_min must be >= 1, got {c_min}")
    if spec.k0 + c_min > spec.n:
        raise InvalidSeriesError(
            f"empty scale range: k0 + c_min = {spec.k0 + c_min} exceeds n = {spec.n}")


def _check_window(prefix, spec, j, k, c_min=1):
    if not (spec.k0 <= j < k <= prefix.n) or k - j < c_min:
        raise InvalidSeriesError(
            f"window (j={j}, k={k}) must satisfy k0={spec.k0} <= j < k <= n={prefix.n}")


def pairwise_score(prefix: PrefixSums, spec: BaselineSpec, j: int, k: int,
                   delta: float) -> float:
    _check_window(prefix, spec, j, k)
    s = prefix.sums
    c = k - j
    sc = math.sqrt(c)
    base = (s[spec.k0] - s[0]) / spec.k0
    mean = (s[k] - s[j]) / c
    return float(sc * abs(base - mean) - penalty(prefix.n, c) - sc * delta)


def multiscale_statistic(prefix: PrefixSums, spec: BaselineSpec, c_min: int,
                         delta: float) -> StatisticResult:
    """Maximum penalized deviation of window means from the baseline mean.

    Scans every window ``x_{j+1..k}`` with ``k0 <= j`` and ``k - j >= c_min``
    and maximizes ``sqrt(c) |base - mean| - penalty(n, c) - sqrt(c) delta``.
    The maximizer is reported with ties broken by smallest ``c`` then ``j``.
    Passing the true sup-deviation as ``delta`` gives the centred version.
    """
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    check_scale_range(spec, c_min)
    value, j, c = _backend.kernels.scan_max(prefix.sums, spec.k0, c_min, float(delta))
    s = prefix.sums
    diff = float((s[spec.k0] - s[0]) / spec.k0 - (s[j + c] - s[j]) / c)
    return StatisticResult(float(value), ScaleWindow(int(j), int(j + c)), diff)
