import math

import numpy as np
import pytest

from spikecast.errors import SeriesTooShort, SingularRegression
from spikecast.statfit import adf_test, default_max_lag
from spikecast.statfit.adf import _design, mackinnon_pvalue


def test_default_max_lag_at_reference_length():
    assert default_max_lag(84) == 11
    assert default_max_lag(100) == 12


def test_random_walks_look_non_stationary():
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(1000 + seed)
        walk = np.cumsum(rng.standard_normal(84))
        hits += adf_test(walk).p_value > 0.05
    assert hits >= 90


def test_iid_noise_looks_stationary():
    hits = 0
    for seed in range(100):
        rng = np.random.default_rng(2000 + seed)
        noise = rng.standard_normal(84)
        hits += adf_test(noise).p_value < 0.05
    assert hits >= 90


def test_constant_series_is_singular():
    with pytest.raises(SingularRegression):
        adf_test([3.0] * 84)


def test_too_short():
    with pytest.raises(SeriesTooShort):
        adf_test(list(range(12)), max_lag=8)


def test_result_fields():
    rng = np.random.default_rng(5)
    result = adf_test(rng.standard_normal(84))
    assert 0 <= result.p_value <= 1
    assert result.lags_used >= 0
    assert result.n_obs == 84 - 1 - result.lags_used


def test_statistic_matches_normal_equations_oracle():
    # independent route: explicit (X'X) b = X'y solve and textbook t statistic
    for seed in range(20):
        rng = np.random.default_rng(3000 + seed)
        if seed % 2 == 0:
            y = np.cumsum(rng.standard_normal(84))
        else:
            y = rng.standard_normal(84)
        result = adf_test(y)
        x, target = _design(y, result.lags_used, trim=result.lags_used)
        xtx = x.T @ x
        beta = np.linalg.solve(xtx, x.T @ target)
        resid = target - x @ beta
        sigma2 = float(resid @ resid) / (x.shape[0] - x.shape[1])
        se = math.sqrt(sigma2 * np.linalg.inv(xtx)[1, 1])
        oracle = beta[1] / se
        assert result.statistic == pytest.approx(oracle, abs=1e-8)


def test_mackinnon_tails():
    assert mackinnon_pvalue(5.0) == 1.0
    assert mackinnon_pvalue(-25.0) == 0.0
    # 5% critical value for the constant-only case sits near -2.86
    assert mackinnon_pvalue(-2.86) == pytest.approx(0.05, abs=0.002)
    assert mackinnon_pvalue(-1.0) > 0.5


def test_explicit_max_lag_respected():
    rng = np.random.default_rng(77)
    y = rng.standard_normal(120)
    result = adf_test(y, max_lag=3)
    assert result.lags_used <= 3
