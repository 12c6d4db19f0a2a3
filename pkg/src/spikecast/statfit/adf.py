"""Augmented Dickey-Fuller unit root test (constant-only regression).

The test regression is

    dy_t = alpha + gamma * y_(t-1) + sum_{j=1..k} beta_j * dy_(t-j) + e_t

with the statistic gamma_hat / se(gamma_hat).  The augmentation order k is
chosen by minimizing the AIC over 0..max_lag on a common sample (all
candidates see the rows left after trimming max_lag differences), then the
final regression is refitted on every usable row for the chosen k.

P-values come from MacKinnon's regression-surface approximation for the
constant-only case (1994 coefficients, 2010 update): the statistic is pushed
through a cubic (or quadratic, in the far-left tail) polynomial and mapped
through the standard normal CDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import norm

from ..errors import SeriesTooShort, SingularRegression

# MacKinnon approximation constants, constant-only regression, one series.
_TAU_MAX = 2.74
_TAU_MIN = -18.83
_TAU_STAR = -1.61
# polynomial coefficients in increasing order of the statistic
_TAU_SMALLP = (2.1659, 1.4412, 3.8269e-2)
_TAU_LARGEP = (1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2)


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    p_value: float
    lags_used: int
    n_obs: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value must be in [0, 1], got {self.p_value!r}")


def default_max_lag(n: int) -> int:
    """Schwert's rule of thumb: floor(12 * (n/100)^(1/4))."""
    return int(math.floor(12.0 * (n / 100.0) ** 0.25))


def mackinnon_pvalue(statistic: float) -> float:
    """Approximate p-value for the constant-only ADF statistic."""
    if statistic > _TAU_MAX:
        return 1.0
    if statistic < _TAU_MIN:
        return 0.0
    coeffs = _TAU_SMALLP if statistic <= _TAU_STAR else _TAU_LARGEP
    poly = sum(c * statistic**k for k, c in enumerate(coeffs))
    return float(min(max(norm.cdf(poly), 0.0), 1.0))


def _design(y: np.ndarray, k: int, trim: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows for the regression with k difference lags, trimming ``trim`` rows.

    Returns (X, target) where X columns are [const, level, dy lags 1..k].
    """
    dy = np.diff(y)
    rows = dy.size - trim
    target = dy[trim:]
    x = np.empty((rows, 2 + k))
    x[:, 0] = 1.0
    x[:, 1] = y[trim:-1]
    for j in range(1, k + 1):
        x[:, 1 + j] = dy[trim - j : dy.size - j]
    return x, target


def _ols_stat(x: np.ndarray, target: np.ndarray) -> tuple[float, float, int]:
    """Fit by least squares; return (gamma t-statistic, sse, rows)."""
    rows, cols = x.shape
    if rows <= cols:
        raise SeriesTooShort(
            f"regression has {rows} rows for {cols} coefficients"
        )
    coef, _, rank, _ = np.linalg.lstsq(x, target, rcond=None)
    if rank < cols:
        raise SingularRegression(
            "test regression is rank deficient (constant or collinear series)"
        )
    resid = target - x @ coef
    sse = float(resid @ resid)
    sigma2 = sse / (rows - cols)
    xtx_inv = np.linalg.inv(x.T @ x)
    se = math.sqrt(max(sigma2 * xtx_inv[1, 1], 0.0))
    if se == 0.0:
        raise SingularRegression("standard error of the level coefficient is zero")
    return float(coef[1] / se), sse, rows


def adf_test(
    series: Sequence[float],
    max_lag: int | None = None,
    regression: str = "constant",
) -> AdfResult:
    """Run the ADF test with AIC lag selection.

    Args:
        series: Observations, oldest first.
        max_lag: Largest augmentation order to consider; defaults to
            Schwert's rule capped so the selection regression keeps at least
            ten rows.
        regression: Only "constant" is supported.

    Raises:
        SeriesTooShort: fewer than ``max_lag + 10`` observations.
        SingularRegression: degenerate regressors (e.g. a constant series).
    """
    if regression != "constant":
        raise ValueError(f"only the constant regression is supported, got {regression!r}")
    y = np.asarray(series, dtype=float)
    n = y.size
    if max_lag is None:
        max_lag = max(min(default_max_lag(n), n - 11), 0)
    if max_lag < 0:
        raise ValueError("max_lag must be >= 0")
    if n < max_lag + 10:
        raise SeriesTooShort(
            f"ADF with max_lag {max_lag} needs at least {max_lag + 10} "
            f"observations, got {n}"
        )

    # Lag selection on a common sample so the AICs are comparable.
    x_full, target_full = _design(y, max_lag, trim=max_lag)
    rows = target_full.size
    best_k = 0
    best_aic = math.inf
    for k in range(0, max_lag + 1):
        x = x_full[:, : 2 + k]
        cols = 2 + k
        if rows <= cols:
            break
        coef, _, rank, _ = np.linalg.lstsq(x, target_full, rcond=None)
        if rank < cols:
            if k == 0:
                raise SingularRegression(
                    "test regression is rank deficient (constant or collinear series)"
                )
            continue
        resid = target_full - x @ coef
        sse = float(resid @ resid)
        aic = rows * math.log(sse / rows) + 2.0 * cols if sse > 0 else -math.inf
        if aic < best_aic:
            best_aic = aic
            best_k = k

    x_best, target_best = _design(y, best_k, trim=best_k)
    statistic, _, n_obs = _ols_stat(x_best, target_best)
    return AdfResult(
        statistic=statistic,
        p_value=mackinnon_pvalue(statistic),
        lags_used=best_k,
        n_obs=n_obs,
    )
