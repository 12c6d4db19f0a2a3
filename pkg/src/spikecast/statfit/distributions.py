"""Candidate distribution catalog with deterministic maximum-likelihood fitting.

Eight continuous families are supported, parameterized the conventional way
as (shape..., loc, scale).  Fitting maximizes the log-likelihood with
Nelder-Mead over each family's free parameters; location/scale handling is
fixed per family so that results are deterministic and directly comparable:

* bounded families (beta, wrapped Cauchy, uniform, Bradford) live on the
  data envelope widened to at least the unit interval,
* one-sided families (exponential, folded normal, generalized Pareto) and
  the truncated normal anchor loc at 0,
* uniform and exponential have closed-form maximum-likelihood estimates and
  skip the optimizer entirely.

Samples sitting exactly on a support endpoint are nudged inward by a tiny
epsilon inside the likelihood only, so curves fitted to cumulative data
(which retains one exact 0 and one exact 1) stay finite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, stats

from ..errors import InvalidParams, SupportViolation, TooFewSamples

_EDGE_EPS = 1e-9
_PENALTY = 1e12


class DistKind(enum.Enum):
    BETA = "beta"
    WRAPPED_CAUCHY = "wrapcauchy"
    UNIFORM = "uniform"
    BRADFORD = "bradford"
    TRUNCATED_NORMAL = "truncnorm"
    FOLDED_NORMAL = "foldnorm"
    GENERALIZED_PARETO = "genpareto"
    EXPONENTIAL = "expon"


ALL_KINDS = tuple(DistKind)

_SHAPE_COUNT = {
    DistKind.BETA: 2,
    DistKind.WRAPPED_CAUCHY: 1,
    DistKind.UNIFORM: 0,
    DistKind.BRADFORD: 1,
    DistKind.TRUNCATED_NORMAL: 2,
    DistKind.FOLDED_NORMAL: 1,
    DistKind.GENERALIZED_PARETO: 1,
    DistKind.EXPONENTIAL: 0,
}


@dataclass(frozen=True)
class DistParams:
    """(shape..., loc, scale) tuple in the conventional ordering."""

    shape: tuple[float, ...] = ()
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "shape", tuple(float(s) for s in self.shape))

    def flat(self) -> tuple[float, ...]:
        return (*self.shape, self.loc, self.scale)


def _validate(kind: DistKind, params: DistParams) -> None:
    if len(params.shape) != _SHAPE_COUNT[kind]:
        raise InvalidParams(
            f"{kind.value} takes {_SHAPE_COUNT[kind]} shape parameters, "
            f"got {len(params.shape)}"
        )
    if not math.isfinite(params.loc) or not math.isfinite(params.scale):
        raise InvalidParams(f"{kind.value} loc/scale must be finite")
    if params.scale <= 0:
        raise InvalidParams(f"scale must be > 0, got {params.scale!r}")
    for s in params.shape:
        if not math.isfinite(s):
            raise InvalidParams(f"{kind.value} shape must be finite")
    if kind is DistKind.BETA and (params.shape[0] <= 0 or params.shape[1] <= 0):
        raise InvalidParams("beta shapes must be > 0")
    if kind is DistKind.WRAPPED_CAUCHY and not 0 <= params.shape[0] < 1:
        raise InvalidParams("wrapped Cauchy concentration must be in [0, 1)")
    if kind is DistKind.BRADFORD and params.shape[0] <= 0:
        raise InvalidParams("Bradford shape must be > 0")
    if kind is DistKind.TRUNCATED_NORMAL and params.shape[0] >= params.shape[1]:
        raise InvalidParams("truncated normal needs lower bound < upper bound")
    if kind is DistKind.FOLDED_NORMAL and params.shape[0] < 0:
        raise InvalidParams("folded normal shape must be >= 0")


def _frozen(kind: DistKind, params: DistParams):
    # wrapped Cauchy with zero concentration is uniform on the wrapped
    # interval; scipy's implementation returns NaN at exactly c = 0
    if kind is DistKind.WRAPPED_CAUCHY and params.shape[0] == 0.0:
        return stats.uniform(loc=params.loc, scale=2.0 * math.pi * params.scale)
    dist = getattr(stats, kind.value)
    return dist(*params.shape, loc=params.loc, scale=params.scale)


def dist_cdf(kind: DistKind, params: DistParams, x: float) -> float:
    """Cumulative distribution function at ``x``."""
    _validate(kind, params)
    value = float(_frozen(kind, params).cdf(x))
    return min(max(value, 0.0), 1.0)


def cdf_values(kind: DistKind, params: DistParams, xs: Sequence[float]) -> np.ndarray:
    """Vectorized :func:`dist_cdf`; identical values, one scipy call."""
    _validate(kind, params)
    values = np.asarray(_frozen(kind, params).cdf(np.asarray(xs, dtype=float)))
    return np.clip(values, 0.0, 1.0)


def dist_loglik(
    kind: DistKind, params: DistParams, samples: Sequence[float]
) -> float:
    """Log-likelihood of ``samples``, with support endpoints nudged inward.

    Samples outside the support yield ``-inf``.
    """
    _validate(kind, params)
    x = np.asarray(samples, dtype=float)
    frozen = _frozen(kind, params)
    lo, hi = frozen.support()
    span = hi - lo if math.isfinite(hi - lo) else max(abs(lo), 1.0)
    eps = _EDGE_EPS * max(span, 1.0)
    if np.any(x < lo - eps) or np.any(x > hi + eps):
        return float("-inf")
    clipped = np.clip(x, lo + eps, hi - eps if math.isfinite(hi) else np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        logpdf = frozen.logpdf(clipped)
    if not np.all(np.isfinite(logpdf)):
        return float("-inf")
    return float(np.sum(logpdf))


def _bounded_envelope(x: np.ndarray) -> tuple[float, float]:
    """Support for bounded families: the data envelope, at least [0, 1]."""
    return min(0.0, float(x.min())), max(1.0, float(x.max()))


def _maximize(
    objective: Callable[[np.ndarray], float], x0: Sequence[float]
) -> np.ndarray:
    # one restart from the first optimum: rebuilding the simplex dislodges
    # Nelder-Mead when it has collapsed against a support boundary
    x = np.asarray(x0, dtype=float)
    for _ in range(2):
        result = optimize.minimize(
            lambda v: -objective(v),
            x0=x,
            method="Nelder-Mead",
            options={"maxiter": 2000, "maxfev": 8000, "xatol": 1e-8, "fatol": 1e-10},
        )
        x = result.x
    return x


def _loglik_or_penalty(kind: DistKind, params: DistParams, x: np.ndarray) -> float:
    """Objective for the optimizer: log-likelihood, or a graded penalty.

    Support violations are penalized proportionally to how far the data
    sticks out, so the simplex can find its way back to the feasible region.
    """
    try:
        _validate(kind, params)
    except InvalidParams:
        return -_PENALTY
    lo, hi = _frozen(kind, params).support()
    excess = max(0.0, lo - float(x.min())) + max(0.0, float(x.max()) - hi)
    if excess > 0.0:
        return -_PENALTY * (1.0 + excess)
    ll = dist_loglik(kind, params, x)
    if not math.isfinite(ll):
        return -_PENALTY
    return ll


def _fit_beta(x: np.ndarray) -> DistParams:
    lo, hi = _bounded_envelope(x)
    span = hi - lo
    z = (x - lo) / span
    m = float(np.mean(z))
    v = max(float(np.var(z)), 1e-6)
    common = max(m * (1 - m) / v - 1.0, 1e-3)
    a0 = min(max(m * common, 1e-3), 1e3)
    b0 = min(max((1 - m) * common, 1e-3), 1e3)

    def ll(theta: np.ndarray) -> float:
        a, b = np.exp(theta)
        return _loglik_or_penalty(
            DistKind.BETA, DistParams(shape=(a, b), loc=lo, scale=span), x
        )

    best = np.exp(_maximize(ll, [math.log(a0), math.log(b0)]))
    return DistParams(shape=(float(best[0]), float(best[1])), loc=lo, scale=span)


def _fit_wrapcauchy(x: np.ndarray) -> DistParams:
    lo, hi = _bounded_envelope(x)
    scale = (hi - lo) / (2.0 * math.pi)

    def ll(theta: np.ndarray) -> float:
        c = 1.0 / (1.0 + math.exp(-theta[0]))
        return _loglik_or_penalty(
            DistKind.WRAPPED_CAUCHY, DistParams(shape=(c,), loc=lo, scale=scale), x
        )

    best = _maximize(ll, [math.log(0.25 / 0.75)])
    c = 1.0 / (1.0 + math.exp(-best[0]))
    return DistParams(shape=(float(c),), loc=lo, scale=scale)


def _fit_uniform(x: np.ndarray) -> DistParams:
    # closed form: the maximum-likelihood support is exactly the data range
    return DistParams(shape=(), loc=float(x.min()), scale=float(x.max() - x.min()))


def _fit_bradford(x: np.ndarray) -> DistParams:
    lo, hi = _bounded_envelope(x)
    span = hi - lo

    def ll(theta: np.ndarray) -> float:
        c = math.exp(theta[0])
        return _loglik_or_penalty(
            DistKind.BRADFORD, DistParams(shape=(c,), loc=lo, scale=span), x
        )

    best = _maximize(ll, [0.0])
    return DistParams(shape=(float(math.exp(best[0])),), loc=lo, scale=span)


def _fit_truncnorm(x: np.ndarray) -> DistParams:
    lo, hi = float(x.min()), float(x.max())
    span = hi - lo
    scale0 = max(float(np.std(x)), 1e-3)
    a0 = (lo - 0.05 * span) / scale0
    b0 = (hi + 0.05 * span) / scale0

    def ll(theta: np.ndarray) -> float:
        a = theta[0]
        b = a + math.exp(theta[1])
        scale = math.exp(theta[2])
        return _loglik_or_penalty(
            DistKind.TRUNCATED_NORMAL,
            DistParams(shape=(a, b), loc=0.0, scale=scale),
            x,
        )

    best = _maximize(ll, [a0, math.log(max(b0 - a0, 1e-6)), math.log(scale0)])
    a = float(best[0])
    b = a + float(math.exp(best[1]))
    return DistParams(shape=(a, b), loc=0.0, scale=float(math.exp(best[2])))


def _fit_foldnorm(x: np.ndarray) -> DistParams:
    if float(x.min()) < 0:
        raise SupportViolation("folded normal requires non-negative samples")
    m = float(np.mean(x))
    s = max(float(np.std(x)), 1e-6)
    c0 = min(max(m / s, 1e-3), 1e3)

    def ll(theta: np.ndarray) -> float:
        c, scale = np.exp(theta)
        return _loglik_or_penalty(
            DistKind.FOLDED_NORMAL, DistParams(shape=(c,), loc=0.0, scale=scale), x
        )

    best = np.exp(_maximize(ll, [math.log(c0), math.log(s)]))
    return DistParams(shape=(float(best[0]),), loc=0.0, scale=float(best[1]))


def _fit_genpareto(x: np.ndarray) -> DistParams:
    # The likelihood is unbounded for c < -1 (the density diverges at the
    # upper support endpoint), so the fit is restricted to c >= -1; c = -1
    # is the uniform limit of the family.
    if float(x.min()) < 0:
        raise SupportViolation("generalized Pareto requires non-negative samples")
    m = float(np.mean(x))
    v = max(float(np.var(x)), 1e-9)
    c0 = min(max(0.5 * (1.0 - m * m / v), -0.9), 5.0)
    scale0 = max(m * max(1.0 - c0, 1e-3), 1e-6)
    if c0 < 0:
        # keep the starting support endpoint -scale/c beyond the data max
        scale0 = max(scale0, -c0 * float(x.max()) * 1.05)

    def ll(theta: np.ndarray) -> float:
        c = -1.0 + math.exp(theta[0])
        scale = math.exp(theta[1])
        return _loglik_or_penalty(
            DistKind.GENERALIZED_PARETO,
            DistParams(shape=(c,), loc=0.0, scale=scale),
            x,
        )

    best = _maximize(ll, [math.log(c0 + 1.0), math.log(scale0)])
    c = -1.0 + float(math.exp(best[0]))
    return DistParams(shape=(c,), loc=0.0, scale=float(math.exp(best[1])))


def _fit_expon(x: np.ndarray) -> DistParams:
    # closed form with loc anchored at 0: scale is the sample mean
    if float(x.min()) < 0:
        raise SupportViolation("exponential requires non-negative samples")
    return DistParams(shape=(), loc=0.0, scale=float(np.mean(x)))


_FITTERS = {
    DistKind.BETA: _fit_beta,
    DistKind.WRAPPED_CAUCHY: _fit_wrapcauchy,
    DistKind.UNIFORM: _fit_uniform,
    DistKind.BRADFORD: _fit_bradford,
    DistKind.TRUNCATED_NORMAL: _fit_truncnorm,
    DistKind.FOLDED_NORMAL: _fit_foldnorm,
    DistKind.GENERALIZED_PARETO: _fit_genpareto,
    DistKind.EXPONENTIAL: _fit_expon,
}


def dist_fit(kind: DistKind, samples: Sequence[float]) -> DistParams:
    """Maximum-likelihood fit of one family to the samples.

    Raises:
        TooFewSamples: fewer than 3 samples.
        SupportViolation: samples outside the family's support, or a
            zero-spread sample set (degenerate for every continuous family).
    """
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size < 3:
        raise TooFewSamples(f"distribution fitting needs >= 3 samples, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise SupportViolation("samples must be finite")
    if float(x.max() - x.min()) <= 0:
        raise SupportViolation("samples have zero spread; continuous fit is degenerate")
    params = _FITTERS[kind](x)
    _validate(kind, params)
    return params
