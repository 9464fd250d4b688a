import math

import numpy as np
import pytest

from relevantscan.synthetic import (BOUNDARY_A, ErrorModel, MeanSpec, eval_mu_a, gen_errors,
                                    gen_series, mean_from_dict, oracle_baseline, oracle_d_inf,
                                    oracle_t_star, scenario_from_dict)


def test_mean_function_values():
    assert eval_mu_a(0.0, 3.0) == 10.0
    assert eval_mu_a(0.25, 3.0) == pytest.approx(10.0, abs=1e-12)
    assert eval_mu_a(1.0, 2.0) == pytest.approx(11.125, abs=1e-12)


def test_baseline_and_boundary():
    assert oracle_baseline(MeanSpec("mu_a", a=2.0)) == pytest.approx(10.0, abs=1e-12)
    assert oracle_d_inf(MeanSpec("mu_a", a=BOUNDARY_A)) == pytest.approx(1.0, abs=1e-2)


def test_t_star_first_crossing():
    t = oracle_t_star(MeanSpec("mu_a", a=2.0), 1.0)
    assert abs(eval_mu_a(t, 2.0) - 10.0) == pytest.approx(1.0, abs=1e-6)
    assert oracle_t_star(MeanSpec("mu_a", a=0.0), 1.0) is None


class ZeroStream:
    def standard_normal(self, size):
        return np.zeros(size)


@pytest.mark.parametrize("kind", ["IID", "MA", "AR", "none"])
def test_zero_stream_gives_zero_errors(kind):
    np.testing.assert_array_equal(gen_errors(ErrorModel(kind), 10, ZeroStream()), 0.0)


def test_zero_noise_series_is_the_mean():
    s = gen_series(MeanSpec("mu_a", a=2.0), ErrorModel("none"), 50, 0)
    np.testing.assert_allclose(s.values, eval_mu_a(np.arange(1, 51) / 50, 2.0), rtol=0, atol=0)


def test_reproducible_bytes():
    a = gen_series(MeanSpec("mu_a", a=2.0), ErrorModel("AR"), 500, 42)
    b = gen_series(MeanSpec("mu_a", a=2.0), ErrorModel("AR"), 500, 42)
    assert a.values.tobytes() == b.values.tobytes()


@pytest.mark.parametrize("kind,lrv", [("IID", 0.25), ("MA", 0.45), ("AR", 0.75)])
def test_true_lrv_and_marginal_variance(kind, lrv):
    model = ErrorModel(kind)
    assert model.true_lrv == pytest.approx(lrv)
    assert model.marginal_variance == pytest.approx(0.25)
    errors = gen_errors(model, 200_000, np.random.default_rng(1))
    assert errors.var() == pytest.approx(0.25, rel=0.03)


def test_printed_ar_form():
    model = ErrorModel("AR", "printed")
    assert model.marginal_variance == pytest.approx(12 / 61)


def test_series_unbiased_at_fixed_index():
    mean = MeanSpec("mu_a", a=2.0)
    draws = [gen_series(mean, ErrorModel("MA"), 40, s).values[29] for s in range(2000)]
    assert np.mean(draws) == pytest.approx(eval_mu_a(30 / 40, 2.0), abs=4 * 0.5 / math.sqrt(2000))


def test_piecewise_mean_and_parsers():
    spec = mean_from_dict({"kind": "piecewise", "pieces": [
        {"start": 0, "end": 0.5, "x": [0, 0.5], "y": [0, 0]},
        {"start": 0.5, "end": 1, "x": [0.5, 1], "y": [2, 2]}]}, t0=0.25)
    assert spec(0.25) == 0.0 and spec(0.75) == 2.0
    assert oracle_d_inf(spec) == pytest.approx(2.0)
    mean, error, n, delta, seed = scenario_from_dict(
        {"mean": {"kind": "mu_a", "a": 2}, "error": {"kind": "MA"}, "n": 100, "seed": 3})
    assert (mean.a, error.kind, n, delta, seed) == (2.0, "MA", 100, 1.0, 3)


def test_invalid_kinds():
    with pytest.raises(ValueError):
        ErrorModel("ARMA")
    with pytest.raises(ValueError):
        MeanSpec("cubic")
