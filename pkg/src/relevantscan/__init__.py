"""Multiscale tests for relevant deviations of a slowly varying mean from a baseline."""
__version__ = "0.1.0"

from ._backend import available as available_backends
from .bootstrap import ExtremalSetFamily, estimate_extremal_sets
from .decision import (AnalysisConfig, MinimalDelta, TestReport, minimal_delta,
                       run_bootstrap_test, run_conservative_test, run_test)
from .gaussian import QuantileTable, build_gaussian_quantile_table, critical_value, p_value
from .locator import LocatorResult, default_locator_cmin, locate_first_deviation
from .lrv import DegenerateVarianceError, LrvEstimate, estimate_lrv
from .series import BaselineSpec, InvalidSeriesError, TimeSeries, build_prefix
from .statistic import multiscale_statistic, penalty

__all__ = [
    "AnalysisConfig", "BaselineSpec", "DegenerateVarianceError", "ExtremalSetFamily",
    "InvalidSeriesError", "LocatorResult", "LrvEstimate", "MinimalDelta",
    "QuantileTable", "TestReport", "TimeSeries", "available_backends",
    "build_gaussian_quantile_table", "build_prefix", "critical_value",
    "default_locator_cmin", "estimate_extremal_sets", "estimate_lrv",
    "locate_first_deviation", "minimal_delta", "multiscale_statistic", "p_value",
    "penalty", "run_bootstrap_test", "run_conservative_test", "run_test",
]
