"""First time the mean deviates relevantly from the baseline."""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import _backend
from .lrv import DegenerateVarianceError
from .series import BaselineSpec, as_series, build_prefix
from .statistic import check_scale_range


@dataclass(frozen=True)
class LocatorResult:
    detected: bool
    n: int
    delta: float
    c_min: int
    sigma2_hat: float
    k_hat: int | None = None
    witness: tuple[int, int] | None = None

    @property
    def t_hat(self) -> float:
        """``k_hat / n``, or ``inf`` when nothing was detected."""
        return self.k_hat / self.n if self.detected else math.inf

    def to_dict(self, first_year: int | None = None) -> dict:
        out = {"detected": self.detected}
        if self.detected:
            out.update(k_hat=self.k_hat, t_hat=self.t_hat,
                       witness_j=self.witness[0], witness_k=self.witness[1])
            if first_year is not None:
                out["year_hat"] = first_year + self.k_hat - 1
        out.update(delta=self.delta, c_min=self.c_min, sigma2_hat=self.sigma2_hat)
        return out


def default_locator_cmin(n: int) -> int:
    return 20 + math.isqrt(n)


def locate_first_deviation(series, spec: BaselineSpec, c_min: int, delta: float,
                           sigma_hat: float, sigma2_hat: float | None = None
                           ) -> LocatorResult:
    """Smallest right end ``k`` of a window whose mean departs from the baseline.

    A window ``(j, k)`` with ``k0 <= j <= k - c_min`` qualifies when
    ``|base - mean_j^k| >= delta - sigma_hat log(n) / sqrt(k - j)``. Right ends
    are scanned upward and, for each, left ends upward; the first hit wins.
    """
    if not sigma_hat > 0:
        raise DegenerateVarianceError("degenerate variance: sigma_hat must be positive")
    series = as_series(series)
    check_scale_range(spec, c_min)
    prefix = build_prefix(series)
    slack = sigma_hat * math.log(series.n)
    k, j = _backend.kernels.locate_first(prefix.sums, spec.k0, c_min, float(delta), slack)
    sigma2 = sigma_hat * sigma_hat if sigma2_hat is None else float(sigma2_hat)
    if k < 0:
        return LocatorResult(False, series.n, float(delta), c_min, sigma2)
    return LocatorResult(True, series.n, float(delta), c_min, sigma2,
                         int(k), (int(j), int(k)))
