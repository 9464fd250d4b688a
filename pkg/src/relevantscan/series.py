"""Observation container and prefix-sum arithmetic.

Window indices follow the 1-based convention of the local mean
``mu_j^k = (x_{j+1} + ... + x_k) / (k - j)``, so ``(j, k)`` with
``0 <= j < k <= n`` addresses the stored slice ``values[j:k]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class InvalidSeriesError(ValueError):
    """Raised for malformed observation sequences or index arguments."""


@dataclass(frozen=True)
class TimeSeries:
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1:
            raise InvalidSeriesError("series must be one-dimensional")
        if arr.size < 2:
            raise InvalidSeriesError(f"series needs n >= 2 values, got {arr.size}")
        bad = np.flatnonzero(~np.isfinite(arr))
        if bad.size:
            raise InvalidSeriesError(
                f"non-finite value at index {int(bad[0])} (0-based)")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class PrefixSums:
    """Cumulative sums ``S_0 = 0, S_k = x_1 + ... + x_k`` (left-to-right)."""

    sums: np.ndarray

    @property
    def n(self) -> int:
        return int(self.sums.size - 1)


@dataclass(frozen=True)
class BaselineSpec:
    """Historical baseline: the first ``k0 = floor(n * t0)`` observations."""

    n: int
    t0: float
    k0: int

    def __post_init__(self):
        if not 1 <= self.k0 <= self.n - 1:
            raise InvalidSeriesError(
                f"baseline length k0={self.k0} outside [1, n-1] for n={self.n}; "
                f"t0={self.t0} is too small or too large")

    @classmethod
    def from_t0(cls, n: int, t0: float) -> "BaselineSpec":
        if not 0.0 < t0 < 1.0:
            raise InvalidSeriesError(f"t0 must lie in (0, 1), got {t0}")
        return cls(n=int(n), t0=float(t0), k0=int(math.floor(n * t0)))

    @classmethod
    def from_cutoff(cls, n: int, cutoff: int) -> "BaselineSpec":
        """Baseline made of rows ``1..cutoff``; ``t0 = cutoff / n``."""
        return cls(n=int(n), t0=cutoff / n, k0=int(cutoff))


def as_series(values) -> TimeSeries:
    if isinstance(values, TimeSeries):
        return values
    return TimeSeries(np.asarray(values, dtype=float))


def build_prefix(series) -> PrefixSums:
    series = as_series(series)
    sums = np.empty(series.n + 1)
    sums[0] = 0.0
    # np.cumsum accumulates sequentially, i.e. left to right
    np.cumsum(series.values, out=sums[1:])
    sums.setflags(write=False)
    return PrefixSums(sums)


def local_mean(prefix: PrefixSums, j: int, k: int) -> float:
    """Mean of ``x_{j+1}, ..., x_k``."""
    if not (0 <= j < k <= prefix.n):
        raise InvalidSeriesError(
            f"window (j={j}, k={k}) violates 0 <= j < k <= {prefix.n}")
    return float((prefix.sums[k] - prefix.sums[j]) / (k - j))


def baseline_mean(prefix: PrefixSums, spec: BaselineSpec) -> float:
    if spec.k0 < 1:
        raise InvalidSeriesError("t0 too small for n: empty baseline")
    return local_mean(prefix, 0, spec.k0)
