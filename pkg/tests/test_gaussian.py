import math

import numpy as np
import pytest

import oracles
from relevantscan.gaussian import (BrownianPath, QuantileTable, build_gaussian_quantile_table,
                                   cached_gaussian_table, critical_value, draw_M, p_value,
                                   quantile, simulate_brownian, snap_to_grid)


class ZeroStream:
    def standard_normal(self, size):
        return np.zeros(size)


def test_zero_increments_give_flat_path():
    path = simulate_brownian(1.0, 3.0, ZeroStream())
    np.testing.assert_array_equal(path.values, [0, 0, 0, 0])


def test_grid_shape_and_increment_variance():
    path = simulate_brownian(0.001, 1.0, np.random.default_rng(0))
    assert path.values.size == 1001 and path.values[0] == 0.0
    many = np.concatenate([np.diff(simulate_brownian(0.001, 1.0, np.random.default_rng(s)).values)
                           for s in range(20)])
    assert many.var() == pytest.approx(0.001, rel=0.05)


def test_nonpositive_step_rejected():
    with pytest.raises(ValueError):
        simulate_brownian(0.0, 1.0, np.random.default_rng(0))


def test_zero_path_closed_form():
    path = BrownianPath(0.01, np.zeros(101))
    assert draw_M(path, 0.25) == pytest.approx(-math.sqrt(2 * math.log(math.e / 0.75)))


def test_single_admissible_pair():
    rng = np.random.default_rng(3)
    values = np.concatenate(([0.0], np.cumsum(rng.normal(size=2) * math.sqrt(0.5))))
    path = BrownianPath(0.5, values)
    h = 0.5
    expected = abs(math.sqrt(h) * values[1] / 0.5 - (values[2] - values[1]) / math.sqrt(h)) \
        - math.sqrt(2 * math.log(math.e / h))
    assert draw_M(path, 0.5) == pytest.approx(expected, abs=1e-12)


def test_draw_matches_pairwise_loop(backend):
    for seed in range(5):
        path = simulate_brownian(0.02, 1.0, np.random.default_rng(seed))
        expected = oracles.m_draw(list(path.values), 0.02, 10, 0.2)
        assert draw_M(path, 0.2) == pytest.approx(expected, abs=1e-12)


def test_reflection_invariance():
    path = simulate_brownian(0.01, 1.0, np.random.default_rng(8))
    flipped = BrownianPath(0.01, -path.values)
    assert draw_M(path, 0.3) == draw_M(flipped, 0.3)


def test_t0_off_grid_rejected():
    with pytest.raises(ValueError):
        draw_M(BrownianPath(0.01, np.zeros(101)), 0.255)


def test_snap_to_grid():
    assert snap_to_grid(50 / 120, 0.001) == pytest.approx(0.417)


def test_table_size_and_determinism():
    a = build_gaussian_quantile_table(0.25, 0.01, 200, seed=4)
    b = build_gaussian_quantile_table(0.25, 0.01, 200, seed=4)
    assert len(a) == 200
    np.testing.assert_array_equal(a.draws, b.draws)


def test_cache_round_trip(tmp_path):
    a = cached_gaussian_table(0.25, 0.01, 150, seed=2, cache_dir=tmp_path)
    assert len(list(tmp_path.iterdir())) == 1
    b = cached_gaussian_table(0.25, 0.01, 150, seed=2, cache_dir=tmp_path)
    np.testing.assert_array_equal(a.draws, b.draws)


@pytest.mark.parametrize("draws,level,expected", [
    ([1, 2, 3, 4], 0.5, 2), ([7], 0.3, 7), ([7], 0.99, 7),
    (list(range(1, 101)), 0.95, 95)])
def test_quantile_examples(draws, level, expected):
    assert quantile(QuantileTable(draws, "bootstrap"), level) == expected


def test_empty_table_rejected():
    with pytest.raises(ValueError):
        QuantileTable([], "bootstrap")


def test_p_value_extremes_and_median():
    table = QuantileTable(np.arange(1.0, 200.0), "bootstrap")
    assert p_value(-1.0, table) == 1.0
    assert p_value(1000.0, table) == 1 / 200
    assert p_value(100.0, table) == pytest.approx(0.5)


def test_critical_value_is_coherent_with_p_value():
    rng = np.random.default_rng(0)
    table = QuantileTable(rng.normal(size=199), "bootstrap")
    for alpha in (0.01, 0.05, 0.1, 0.5):
        q = critical_value(table, alpha, 2.0)
        for stat in np.concatenate((2.0 * table.draws, rng.normal(scale=2, size=200))):
            assert (stat >= q) == (p_value(stat, table, 2.0) <= alpha)


def test_critical_value_infinite_when_unreachable():
    assert critical_value(QuantileTable([1.0, 2.0], "bootstrap"), 0.1) == math.inf
