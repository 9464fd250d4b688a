import math

import numpy as np
import pytest

import oracles
from relevantscan.locator import default_locator_cmin, locate_first_deviation
from relevantscan.lrv import DegenerateVarianceError
from relevantscan.series import BaselineSpec


def test_constant_series_large_delta_not_detected():
    result = locate_first_deviation(np.ones(100), BaselineSpec.from_t0(100, 0.25), 10, 5.0, 0.1)
    assert not result.detected and result.t_hat == math.inf
    assert result.to_dict() == {"detected": False, "delta": 5.0, "c_min": 10,
                                "sigma2_hat": pytest.approx(0.01)}


def test_step_series_matches_scan():
    n = 200
    x = np.where(np.arange(1, n + 1) > n // 2, 2.0, 0.0)
    spec = BaselineSpec.from_t0(n, 0.25)
    result = locate_first_deviation(x, spec, 20, 1.0, 0.1)
    k, j = oracles.locate(list(x), spec.k0, 20, 1.0, 0.1)
    assert (result.k_hat, result.witness) == (k, (j, k))
    assert n // 2 < result.k_hat < n // 2 + 20


def test_matches_reference_on_random_series(backend):
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = int(rng.integers(30, 60))
        x = rng.normal(size=n) + np.linspace(0, 3, n)
        spec = BaselineSpec.from_t0(n, 0.25)
        result = locate_first_deviation(x, spec, 4, 1.5, 0.3)
        expected = oracles.locate(list(x), spec.k0, 4, 1.5, 0.3)
        assert (result.k_hat, result.witness[0]) == expected if expected else not result.detected


def test_year_mapping():
    n = 100
    x = np.where(np.arange(n) >= 60, 3.0, 0.0)
    result = locate_first_deviation(x, BaselineSpec.from_t0(n, 0.25), 10, 1.0, 0.2)
    assert result.to_dict(first_year=1900)["year_hat"] == 1900 + result.k_hat - 1


def test_default_cmin():
    assert default_locator_cmin(1000) == 51
    assert default_locator_cmin(200) == 34


def test_nonpositive_sigma():
    with pytest.raises(DegenerateVarianceError):
        locate_first_deviation(np.arange(50.0), BaselineSpec.from_t0(50, 0.25), 5, 1.0, 0.0)
