"""Long-run variance from differences of adjacent non-overlapping block sums."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import InvalidSeriesError, as_series

DEFAULT_BLOCK_LENGTH = 5


class DegenerateVarianceError(ValueError):
    """Raised when the estimated long-run variance is zero."""


@dataclass(frozen=True)
class LrvEstimate:
    sigma2: float
    m: int
    blocks_used: int

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2))


def estimate_lrv(series, m: int, form: str = "sums") -> LrvEstimate:
    """Estimate ``sigma^2 = sum_h Cov(eps_0, eps_h)``.

    Each of the ``floor(n/m) - 1`` adjacent block pairs contributes
    ``m (mean_1 - mean_2)^2 / 2``, i.e. the squared difference of block sums
    divided by ``2m``. Observations past ``m * floor(n/m)`` are dropped.

    ``form="printed"`` divides the squared difference of block *means* by
    ``2m`` instead; that targets ``sigma^2 / m^2`` and is kept only for
    comparison with results computed that way.
    """
    if form not in ("sums", "printed"):
        raise ValueError(f"unknown estimator form {form!r}")
    series = as_series(series)
    if m < 1:
        raise ValueError(f"block length m must be >= 1, got {m}")
    blocks = series.n // m
    if blocks < 2:
        raise InvalidSeriesError(
            f"series too short for block length m={m} (n={series.n})")
    means = series.values[: blocks * m].reshape(blocks, m).mean(axis=1)
    if form == "sums":
        terms = m * np.diff(means) ** 2 / 2.0
    else:
        terms = np.diff(means) ** 2 / (2.0 * m)
    return LrvEstimate(float(terms.mean()), int(m), blocks - 1)


def default_block_length(n: int, rule: str = "fixed") -> int:
    """Block length: ``5`` (``"fixed"``) or ``max(2, round(n^(1/3)))`` (``"rate"``)."""
    if rule == "fixed":
        return DEFAULT_BLOCK_LENGTH
    if rule == "rate":
        return max(2, int(round(n ** (1.0 / 3.0))))
    raise ValueError(f"unknown block-length rule {rule!r}")


def require_positive(estimate: LrvEstimate) -> float:
    """Return ``sigma_hat`` or raise for a degenerate (zero) estimate."""
    if not estimate.sigma2 > 0:
        raise DegenerateVarianceError(
            "degenerate variance: estimated long-run variance is zero")
    return estimate.sigma
