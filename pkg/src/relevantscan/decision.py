"""Decision rules, p-values and the minimal rejected-threshold estimate."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import _backend
from .bootstrap import (BOOTSTRAP_REPLICATIONS, build_bootstrap_quantile_table,
                        estimate_extremal_sets)
from .gaussian import (GAUSSIAN_REPLICATIONS, GRID_STEP, QuantileTable,
                       cached_gaussian_table, critical_value, fresh_seed, p_value,
                       snap_to_grid)
from .lrv import estimate_lrv, require_positive
from .series import BaselineSpec, as_series, build_prefix
from .statistic import check_scale_range, multiscale_statistic

METHODS = ("conservative", "bootstrap")


@dataclass(frozen=True)
class AnalysisConfig:
    """Tuning surface of a single analysis.

    Exactly one of ``t0`` (fraction of the sample) and ``cutoff`` (number of
    leading rows) fixes the baseline. ``standardize=True`` evaluates the
    statistic on ``x / sigma_hat`` (threshold ``delta / sigma_hat``) and
    rescales it by ``sigma_hat``, which puts the scale penalty on the same
    footing as the simulated quantiles when the long-run variance is not 1.
    """

    t0: float | None = None
    delta: float = 1.0
    c_min: int = 20
    m: int = 5
    alpha: float = 0.05
    bootstrap_reps: int = BOOTSTRAP_REPLICATIONS
    gaussian_reps: int = GAUSSIAN_REPLICATIONS
    grid_step: float = GRID_STEP
    seed: int | None = None
    cutoff: int | None = None
    standardize: bool = False
    lrv_form: str = "sums"
    cache_dir: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if (self.t0 is None) == (self.cutoff is None):
            raise ValueError("give exactly one of t0 and cutoff")
        if self.t0 is not None and not 0.0 < self.t0 < 1.0:
            raise ValueError(f"t0 must lie in (0, 1), got {self.t0}")
        if self.cutoff is not None and self.cutoff < 1:
            raise ValueError(f"cutoff must be >= 1, got {self.cutoff}")
        if not (self.delta >= 0 and math.isfinite(self.delta)):
            raise ValueError(f"delta must be finite and >= 0, got {self.delta}")
        if self.c_min < 1:
            raise ValueError(f"c_min must be >= 1, got {self.c_min}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.bootstrap_reps < 50:
            raise ValueError("bootstrap_reps must be >= 50")
        if self.gaussian_reps < 100:
            raise ValueError("gaussian_reps must be >= 100")
        if self.lrv_form not in ("sums", "printed"):
            raise ValueError(f"unknown lrv_form {self.lrv_form!r}")
        if not 0.0 < self.grid_step < 0.5:
            raise ValueError(f"grid_step must lie in (0, 0.5), got {self.grid_step}")

    def baseline(self, n: int) -> BaselineSpec:
        if self.cutoff is not None:
            return BaselineSpec.from_cutoff(n, self.cutoff)
        return BaselineSpec.from_t0(n, self.t0)

    def resolved(self) -> "AnalysisConfig":
        """Copy with a concrete seed, drawn from system entropy when unset."""
        if self.seed is not None:
            return self
        return replace(self, seed=fresh_seed())

    def with_delta(self, delta: float) -> "AnalysisConfig":
        return replace(self, delta=delta)


@dataclass(frozen=True)
class TestReport:
    __test__ = False  # not a pytest test class

    method: str
    n: int
    t0: float
    k0: int
    delta: float
    c_min: int
    m: int
    alpha: float
    statistic: float
    threshold: float
    sigma2_hat: float
    p_value: float
    reject: bool
    seed: int | None
    replications: int
    delta_hat_alpha: float | None = None

    standardize: bool = False

    def to_dict(self) -> dict:
        out = asdict(self)
        if out["delta_hat_alpha"] is None:
            del out["delta_hat_alpha"]
        if not out["standardize"]:
            del out["standardize"]
        return out


@dataclass(frozen=True)
class MinimalDelta:
    delta_hat: float
    alpha: float
    threshold: float


@dataclass(frozen=True)
class Prepared:
    """Series quantities shared by every decision rule."""

    series: object
    prefix: object
    spec: BaselineSpec
    sigma2: float
    sigma: float


def prepare(series, config: AnalysisConfig) -> Prepared:
    series = as_series(series)
    spec = config.baseline(series.n)
    check_scale_range(spec, config.c_min)
    est = estimate_lrv(series, config.m, config.lrv_form)
    sigma = require_positive(est)
    return Prepared(series, build_prefix(series), spec, est.sigma2, sigma)


def gaussian_table_for(spec: BaselineSpec, config: AnalysisConfig) -> QuantileTable:
    t0 = snap_to_grid(spec.k0 / spec.n, config.grid_step)
    return cached_gaussian_table(t0, config.grid_step, config.gaussian_reps,
                                 config.seed, config.cache_dir)


def bootstrap_table_for(prep: Prepared, config: AnalysisConfig) -> QuantileTable:
    family = estimate_extremal_sets(prep.prefix, prep.spec, config.c_min, prep.sigma)
    return build_bootstrap_quantile_table(family, prep.spec, prep.prefix.n, prep.sigma,
                                          config.bootstrap_reps, config.seed)


def test_statistic(prep: Prepared, config: AnalysisConfig, delta: float) -> float:
    if not config.standardize:
        return multiscale_statistic(prep.prefix, prep.spec, config.c_min, delta).value
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    value, _, _ = _backend.kernels.scan_max(prep.prefix.sums / prep.sigma, prep.spec.k0,
                                            config.c_min, delta / prep.sigma)
    return prep.sigma * value


def decide(prep: Prepared, config: AnalysisConfig, method: str,
           table: QuantileTable) -> TestReport:
    """Compare the statistic at ``config.delta`` with the calibrated threshold."""
    scale = prep.sigma if method == "conservative" else 1.0
    stat = test_statistic(prep, config, config.delta)
    threshold = critical_value(table, config.alpha, scale)
    return TestReport(
        method=method, n=prep.prefix.n, t0=prep.spec.t0, k0=prep.spec.k0,
        delta=float(config.delta), c_min=config.c_min, m=config.m,
        alpha=config.alpha, statistic=stat, threshold=threshold,
        sigma2_hat=prep.sigma2, p_value=p_value(stat, table, scale),
        reject=bool(stat >= threshold), seed=config.seed, replications=len(table),
        standardize=config.standardize)


def run_conservative_test(series, config: AnalysisConfig,
                          table: QuantileTable | None = None) -> TestReport:
    """Reject when the statistic reaches ``sigma_hat`` times the bound's critical value."""
    config = config.resolved()
    prep = prepare(series, config)
    if table is None:
        table = gaussian_table_for(prep.spec, config)
    return decide(prep, config, "conservative", table)


def run_bootstrap_test(series, config: AnalysisConfig,
                       table: QuantileTable | None = None) -> TestReport:
    """Reject when the statistic reaches the bootstrap critical value.

    The bootstrap table does not depend on ``delta``; pass a prebuilt one to
    test several thresholds against the same quantile.
    """
    config = config.resolved()
    prep = prepare(series, config)
    if table is None:
        table = bootstrap_table_for(prep, config)
    return decide(prep, config, "bootstrap", table)


def run_test(series, config: AnalysisConfig, method: str = "bootstrap",
             table: QuantileTable | None = None) -> TestReport:
    if method == "conservative":
        return run_conservative_test(series, config, table)
    if method == "bootstrap":
        return run_bootstrap_test(series, config, table)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def build_table(series, config: AnalysisConfig, method: str = "bootstrap") -> QuantileTable:
    prep = prepare(series, config)
    if method == "conservative":
        return gaussian_table_for(prep.spec, config)
    return bootstrap_table_for(prep, config)


def minimal_delta_from(prep: Prepared, config: AnalysisConfig, table: QuantileTable,
                       scale: float = 1.0) -> MinimalDelta:
    q = critical_value(table, config.alpha, scale)
    if q == math.inf:
        return MinimalDelta(0.0, config.alpha, q)
    # each window score falls with slope sqrt(c) in delta, so the crossing is explicit
    if config.standardize:
        best = prep.sigma * _backend.kernels.min_delta_scan(
            prep.prefix.sums / prep.sigma, prep.spec.k0, config.c_min, q / prep.sigma)
    else:
        best = _backend.kernels.min_delta_scan(prep.prefix.sums, prep.spec.k0,
                                               config.c_min, q)
    delta_hat = max(0.0, float(best))
    for _ in range(10_000):
        stat = test_statistic(prep, config, delta_hat)
        if stat < q:
            return MinimalDelta(delta_hat, config.alpha, q)
        delta_hat = float(np.nextafter(delta_hat, math.inf))
    raise RuntimeError("minimal delta did not settle")


def minimal_delta(series, config: AnalysisConfig, table: QuantileTable | None = None,
                  method: str = "bootstrap") -> MinimalDelta:
    """Smallest ``delta >= 0`` at which the test stops rejecting."""
    config = config.resolved()
    prep = prepare(series, config)
    if method == "conservative":
        table = table if table is not None else gaussian_table_for(prep.spec, config)
        return minimal_delta_from(prep, config, table, prep.sigma)
    table = table if table is not None else bootstrap_table_for(prep, config)
    return minimal_delta_from(prep, config, table)
