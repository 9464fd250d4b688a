import numpy as np
import pytest

from relevantscan.series import (BaselineSpec, InvalidSeriesError, TimeSeries,
                                 baseline_mean, build_prefix, local_mean)


def test_prefix_sums_of_small_series():
    prefix = build_prefix([1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(prefix.sums, [0.0, 1.0, 3.0, 6.0, 10.0])
    assert prefix.n == 4


def test_local_mean_uses_half_open_window():
    prefix = build_prefix([1.0, 2.0, 3.0, 4.0])
    assert local_mean(prefix, 1, 3) == 2.5
    assert local_mean(prefix, 0, 4) == 2.5


def test_baseline_from_t0_floors():
    spec = BaselineSpec.from_t0(10, 0.25)
    assert spec.k0 == 2
    assert baseline_mean(build_prefix(np.arange(10.0)), spec) == 0.5


def test_baseline_from_cutoff_is_exact():
    spec = BaselineSpec.from_cutoff(120, 50)
    assert spec.k0 == 50 and spec.t0 == 50 / 120


def test_baseline_outside_range_is_rejected():
    with pytest.raises(InvalidSeriesError):
        BaselineSpec.from_t0(10, 0.05)
    with pytest.raises(InvalidSeriesError):
        BaselineSpec.from_cutoff(10, 10)


def test_nonfinite_value_reports_index():
    with pytest.raises(InvalidSeriesError, match="index 2"):
        TimeSeries([1.0, 2.0, float("nan")])


def test_series_needs_two_values():
    with pytest.raises(InvalidSeriesError):
        TimeSeries([1.0])


def test_series_values_are_read_only():
    s = TimeSeries([1.0, 2.0])
    with pytest.raises(ValueError):
        s.values[0] = 5.0


def test_local_mean_rejects_empty_window():
    with pytest.raises(InvalidSeriesError):
        local_mean(build_prefix([1.0, 2.0]), 1, 1)
