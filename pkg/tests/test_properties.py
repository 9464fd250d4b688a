import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import oracles
from relevantscan.bootstrap import estimate_extremal_sets
from relevantscan.gaussian import QuantileTable, critical_value, p_value, quantile
from relevantscan.locator import locate_first_deviation
from relevantscan.series import BaselineSpec, build_prefix
from relevantscan.statistic import multiscale_statistic

values = st.floats(-10, 10, allow_nan=False, width=64)
series = arrays(np.float64, st.integers(12, 30), elements=values)


@settings(max_examples=60, deadline=None)
@given(series, st.sampled_from([0.25, 0.5]), st.integers(1, 4), st.sampled_from([0.0, 0.5, 1.0]))
def test_statistic_equals_exhaustive_search(x, t0, c_min, delta):
    spec = BaselineSpec.from_t0(x.size, t0)
    got = multiscale_statistic(build_prefix(x), spec, c_min, delta)
    value, _, _ = oracles.statistic(list(x), spec.k0, c_min, delta)
    assert got.value == pytest.approx(value, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(series, st.floats(0, 3), st.floats(0, 3))
def test_statistic_nonincreasing_in_delta(x, d1, d2):
    spec = BaselineSpec.from_t0(x.size, 0.25)
    prefix = build_prefix(x)
    lo, hi = sorted((d1, d2))
    assert multiscale_statistic(prefix, spec, 2, lo).value >= \
        multiscale_statistic(prefix, spec, 2, hi).value


@settings(max_examples=40, deadline=None)
@given(series, st.floats(-100, 100))
def test_statistic_shift_invariant(x, shift):
    spec = BaselineSpec.from_t0(x.size, 0.25)
    a = multiscale_statistic(build_prefix(x), spec, 2, 0.5).value
    b = multiscale_statistic(build_prefix(x + shift), spec, 2, 0.5).value
    assert a == pytest.approx(b, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(series, st.floats(0.01, 2.0))
def test_every_scale_keeps_its_largest_deviation(x, sigma):
    spec = BaselineSpec.from_t0(x.size, 0.25)
    prefix = build_prefix(x)
    family = estimate_extremal_sets(prefix, spec, 2, sigma)
    s = prefix.sums
    base = s[spec.k0] / spec.k0
    for c in family.scales:
        members = family.members(c)
        dev = {j: abs(base - (s[j + c] - s[j]) / c) for j in range(spec.k0, x.size - c + 1)}
        best = max(dev, key=dev.get)
        assert (best, best + c) in members
        assert set(members) <= {(j, j + c) for j in dev}


@settings(max_examples=40, deadline=None)
@given(series, st.floats(0, 2), st.floats(0, 2), st.floats(0.01, 1))
def test_locator_earlier_for_smaller_delta(x, d1, d2, sigma):
    spec = BaselineSpec.from_t0(x.size, 0.25)
    lo, hi = sorted((d1, d2))
    a = locate_first_deviation(x, spec, 3, lo, sigma)
    b = locate_first_deviation(x, spec, 3, hi, sigma)
    assert a.t_hat <= b.t_hat
    if a.detected:
        assert a.k_hat >= spec.k0 + 3


draw_lists = st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=300)


@settings(max_examples=80, deadline=None)
@given(draw_lists, st.floats(0.005, 0.5), st.floats(0.1, 3), st.floats(-6, 6))
def test_reject_iff_p_value_below_alpha(draws, alpha, scale, stat):
    table = QuantileTable(draws, "bootstrap")
    for t in (stat, *(scale * table.draws[:5])):
        assert (t >= critical_value(table, alpha, scale)) == (p_value(t, table, scale) <= alpha)


@settings(max_examples=60, deadline=None)
@given(draw_lists, st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_quantile_monotone(draws, l1, l2):
    table = QuantileTable(draws, "gaussian_bound")
    lo, hi = sorted((l1, l2))
    assert quantile(table, lo) <= quantile(table, hi)
    assert p_value(-math.inf, table) == 1.0
