"""Software reliability growth models: closed forms and nonlinear fitting.

Eight classic model families are covered.  Six expose a mean value function
mu(t), the expected cumulative failure count by time t; two (Jelinski-Moranda
and the imperfect-debugging variant) are defined through per-failure hazard
rates instead and are rejected by the mean-value operations.

Mean value functions (all satisfy mu(0) = 0):

    exponential            mu(t) = K * (1 - exp(-r t))
    nhpp_basic             mu(t) = V * (1 - exp(-(L/V) t))
    goel_okumoto_mean      mu(t) = a * (1 - exp(-b t))
    delayed_s              mu(t) = K * (1 - (1 + r t) exp(-r t))
    inflection_s           mu(t) = K * (1 - exp(-r t)) / (1 + i exp(-r t))
    musa_okumoto_log       mu(t) = (1/theta) * ln(L theta t + 1)

Hazard rates:

    jelinski_moranda       Z(i) = phi * (K - (i - 1))
    goel_okumoto_imperfect Z(i) = (K - p (i - 1)) * r

Fitting minimizes the sum of squared deviations between mu(t_k) and the
observed cumulative counts, using Nelder-Mead on log-transformed parameters
(which keeps every parameter positive).  All fitting is deterministic and
re-entrant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from .errors import (
    ExhaustedFaults,
    IndexExceedsFaults,
    InvalidParams,
    NonMonotoneData,
    TooFewPoints,
    UnsupportedKind,
)


class SrgmKind(enum.Enum):
    EXPONENTIAL = "exponential"
    JELINSKI_MORANDA = "jelinski_moranda"
    GOEL_OKUMOTO_IMPERFECT = "goel_okumoto_imperfect"
    NHPP_BASIC = "nhpp_basic"
    GOEL_OKUMOTO_MEAN_VALUE = "goel_okumoto_mean_value"
    DELAYED_S = "delayed_s"
    INFLECTION_S = "inflection_s"
    MUSA_OKUMOTO_LOG = "musa_okumoto_log"


# Ordered parameter names per kind.  The first entry of every mean-value kind
# except musa_okumoto_log is the asymptotic failure count.
PARAM_NAMES: dict[SrgmKind, tuple[str, ...]] = {
    SrgmKind.EXPONENTIAL: ("total_defects", "detection_rate"),
    SrgmKind.JELINSKI_MORANDA: ("total_defects", "hazard_per_fault"),
    SrgmKind.GOEL_OKUMOTO_IMPERFECT: (
        "total_defects",
        "detection_rate",
        "imperfect_debug_prob",
    ),
    SrgmKind.NHPP_BASIC: ("eventual_failures", "initial_intensity"),
    SrgmKind.GOEL_OKUMOTO_MEAN_VALUE: ("eventual_errors", "detection_rate"),
    SrgmKind.DELAYED_S: ("total_defects", "detection_rate"),
    SrgmKind.INFLECTION_S: ("total_defects", "detection_rate", "inflection_factor"),
    SrgmKind.MUSA_OKUMOTO_LOG: ("initial_intensity", "decay_rate"),
}

MEAN_VALUE_KINDS = (
    SrgmKind.EXPONENTIAL,
    SrgmKind.NHPP_BASIC,
    SrgmKind.GOEL_OKUMOTO_MEAN_VALUE,
    SrgmKind.DELAYED_S,
    SrgmKind.INFLECTION_S,
    SrgmKind.MUSA_OKUMOTO_LOG,
)

HAZARD_KINDS = (SrgmKind.JELINSKI_MORANDA, SrgmKind.GOEL_OKUMOTO_IMPERFECT)

FIT_MAX_ITERATIONS = 500
FIT_TOLERANCE = 1e-10


@dataclass(frozen=True)
class SrgmParams:
    """Parameter vector for one model kind, ordered per ``PARAM_NAMES``."""

    kind: SrgmKind
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        names = PARAM_NAMES[self.kind]
        vals = tuple(float(v) for v in self.values)
        if len(vals) != len(names):
            raise InvalidParams(
                f"{self.kind.value} takes {len(names)} parameters "
                f"({', '.join(names)}), got {len(vals)}"
            )
        for name, v in zip(names, vals):
            if not math.isfinite(v):
                raise InvalidParams(f"{self.kind.value}.{name} is not finite")
            if name == "imperfect_debug_prob":
                if not 0.0 <= v <= 1.0:
                    raise InvalidParams(f"{name} must be in [0, 1], got {v!r}")
            elif name == "inflection_factor":
                if v < 0:
                    raise InvalidParams(f"{name} must be >= 0, got {v!r}")
            elif v < 0:
                raise InvalidParams(f"{self.kind.value}.{name} must be >= 0, got {v!r}")
        object.__setattr__(self, "values", vals)

    def as_dict(self) -> dict[str, float]:
        return dict(zip(PARAM_NAMES[self.kind], self.values))

    def get(self, name: str) -> float:
        return self.as_dict()[name]


@dataclass(frozen=True)
class SrgmFitResult:
    kind: SrgmKind
    params: SrgmParams
    sse: float
    iterations: int
    converged: bool


def _require_kind(kind: SrgmKind, params: SrgmParams) -> None:
    if params.kind is not kind:
        raise InvalidParams(
            f"params are for {params.kind.value}, operation expects {kind.value}"
        )


def _require_mean_value(kind: SrgmKind) -> None:
    if kind in HAZARD_KINDS:
        raise UnsupportedKind(
            f"{kind.value} is hazard-based and has no mean value function"
        )
    if kind not in MEAN_VALUE_KINDS:
        raise UnsupportedKind(f"unknown kind {kind!r}")


def srgm_mean(kind: SrgmKind, params: SrgmParams, t: float) -> float:
    """Expected cumulative failures mu(t) for a mean-value kind."""
    _require_mean_value(kind)
    _require_kind(kind, params)
    if t < 0:
        raise InvalidParams(f"time must be >= 0, got {t!r}")
    v = params.values
    if kind is SrgmKind.EXPONENTIAL:
        scale, rate = v
        return scale * -math.expm1(-rate * t)
    if kind is SrgmKind.NHPP_BASIC:
        eventual, intensity = v
        if eventual == 0:
            return 0.0
        return eventual * -math.expm1(-(intensity / eventual) * t)
    if kind is SrgmKind.GOEL_OKUMOTO_MEAN_VALUE:
        scale, rate = v
        return scale * -math.expm1(-rate * t)
    if kind is SrgmKind.DELAYED_S:
        scale, rate = v
        return scale * (1.0 - (1.0 + rate * t) * math.exp(-rate * t))
    if kind is SrgmKind.INFLECTION_S:
        scale, rate, inflect = v
        decay = math.exp(-rate * t)
        return scale * (1.0 - decay) / (1.0 + inflect * decay)
    if kind is SrgmKind.MUSA_OKUMOTO_LOG:
        intensity, theta = v
        if theta == 0:
            raise InvalidParams("musa_okumoto_log requires decay_rate > 0")
        return math.log(intensity * theta * t + 1.0) / theta
    raise UnsupportedKind(f"unknown kind {kind!r}")


def srgm_intensity(kind: SrgmKind, params: SrgmParams, t: float) -> float:
    """Instantaneous failure rate d mu / dt for a mean-value kind."""
    _require_mean_value(kind)
    _require_kind(kind, params)
    if t < 0:
        raise InvalidParams(f"time must be >= 0, got {t!r}")
    v = params.values
    if kind is SrgmKind.EXPONENTIAL:
        scale, rate = v
        return scale * rate * math.exp(-rate * t)
    if kind is SrgmKind.NHPP_BASIC:
        eventual, intensity = v
        if eventual == 0:
            return 0.0
        return intensity * math.exp(-(intensity / eventual) * t)
    if kind is SrgmKind.GOEL_OKUMOTO_MEAN_VALUE:
        scale, rate = v
        return scale * rate * math.exp(-rate * t)
    if kind is SrgmKind.DELAYED_S:
        scale, rate = v
        return scale * rate * rate * t * math.exp(-rate * t)
    if kind is SrgmKind.INFLECTION_S:
        scale, rate, inflect = v
        decay = math.exp(-rate * t)
        return scale * rate * (1.0 + inflect) * decay / (1.0 + inflect * decay) ** 2
    if kind is SrgmKind.MUSA_OKUMOTO_LOG:
        intensity, theta = v
        return intensity / (intensity * theta * t + 1.0)
    raise UnsupportedKind(f"unknown kind {kind!r}")


def jm_hazard(params: SrgmParams, failure_index: int) -> float:
    """Jelinski-Moranda hazard before the i-th failure: phi * (K - (i - 1))."""
    _require_kind(SrgmKind.JELINSKI_MORANDA, params)
    total, phi = params.values
    if failure_index < 1:
        raise InvalidParams("failure_index must be >= 1")
    if failure_index > total:
        raise IndexExceedsFaults(
            f"failure index {failure_index} exceeds fault population {total}"
        )
    return phi * (total - (failure_index - 1))


def go_imperfect_hazard(params: SrgmParams, failure_index: int) -> float:
    """Imperfect-debugging hazard: (K - p * (i - 1)) * rate."""
    _require_kind(SrgmKind.GOEL_OKUMOTO_IMPERFECT, params)
    total, rate, prob = params.values
    if failure_index < 1:
        raise InvalidParams("failure_index must be >= 1")
    residual = total - prob * (failure_index - 1)
    if residual <= 0:
        raise ExhaustedFaults(
            f"residual fault term is {residual} at failure index {failure_index}"
        )
    return residual * rate


def srgm_remaining(kind: SrgmKind, params: SrgmParams, t: float) -> float:
    """Expected errors still in the system at time t: a * exp(-b t)."""
    if kind is not SrgmKind.GOEL_OKUMOTO_MEAN_VALUE:
        raise InvalidParams(
            f"remaining-error count is defined for goel_okumoto_mean_value, "
            f"not {kind.value}"
        )
    _require_kind(kind, params)
    if t < 0:
        raise InvalidParams(f"time must be >= 0, got {t!r}")
    scale, rate = params.values
    return scale * math.exp(-rate * t)


def _initial_params(kind: SrgmKind, t_max: float, max_count: float) -> tuple[float, ...]:
    """Documented fit initialization.

    Asymptote-style parameters start at 1.5x the largest observed count;
    pure rates start at 1/t_max; intensities (counts per time) combine the
    two; the inflection factor starts at 1.
    """
    scale0 = 1.5 * max_count
    rate0 = 1.0 / t_max
    if kind in (SrgmKind.EXPONENTIAL, SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, SrgmKind.DELAYED_S):
        return (scale0, rate0)
    if kind is SrgmKind.NHPP_BASIC:
        return (scale0, scale0 * rate0)
    if kind is SrgmKind.INFLECTION_S:
        return (scale0, rate0, 1.0)
    if kind is SrgmKind.MUSA_OKUMOTO_LOG:
        return (scale0 * rate0, 1.0 / scale0)
    raise UnsupportedKind(f"cannot initialize fit for {kind!r}")


def srgm_fit(
    kind: SrgmKind, cumulative: Sequence[tuple[float, float]]
) -> SrgmFitResult:
    """Least-squares fit of a mean value function to cumulative failure data.

    Args:
        cumulative: ``(t, count)`` pairs with non-decreasing counts.

    Raises:
        UnsupportedKind: hazard-based kinds cannot be fitted here.
        NonMonotoneData: counts decrease somewhere.
        TooFewPoints: fewer points than parameters plus one.
    """
    _require_mean_value(kind)
    pts = [(float(t), float(c)) for t, c in cumulative]
    n_params = len(PARAM_NAMES[kind])
    if len(pts) < n_params + 1:
        raise TooFewPoints(
            f"fitting {kind.value} needs at least {n_params + 1} points, got {len(pts)}"
        )
    for (_, prev), (_, cur) in zip(pts, pts[1:]):
        if cur < prev:
            raise NonMonotoneData("cumulative counts must be non-decreasing")
    times = np.array([t for t, _ in pts])
    counts = np.array([c for _, c in pts])
    if np.any(times < 0):
        raise InvalidParams("times must be >= 0")

    max_count = float(counts.max())
    if max_count == 0.0:
        # Degenerate all-zero data: the curve collapses onto its t axis.
        zero = {
            SrgmKind.EXPONENTIAL: (0.0, 1.0),
            SrgmKind.NHPP_BASIC: (0.0, 0.0),
            SrgmKind.GOEL_OKUMOTO_MEAN_VALUE: (0.0, 1.0),
            SrgmKind.DELAYED_S: (0.0, 1.0),
            SrgmKind.INFLECTION_S: (0.0, 1.0, 1.0),
            SrgmKind.MUSA_OKUMOTO_LOG: (0.0, 1.0),
        }[kind]
        return SrgmFitResult(
            kind=kind,
            params=SrgmParams(kind, zero),
            sse=0.0,
            iterations=0,
            converged=True,
        )

    t_max = float(times.max())
    if t_max <= 0:
        raise TooFewPoints("fitting needs at least one point with t > 0")
    init = _initial_params(kind, t_max, max_count)

    def objective(log_params: np.ndarray) -> float:
        raw = np.exp(log_params)
        if not np.all(np.isfinite(raw)):
            return 1e300
        params = SrgmParams(kind, tuple(raw))
        resid = np.array([srgm_mean(kind, params, t) for t in times]) - counts
        return float(resid @ resid)

    result = optimize.minimize(
        objective,
        x0=np.log(np.array(init)),
        method="Nelder-Mead",
        options={
            "maxiter": FIT_MAX_ITERATIONS,
            "maxfev": 10 * FIT_MAX_ITERATIONS,
            "xatol": FIT_TOLERANCE,
            "fatol": FIT_TOLERANCE,
        },
    )
    fitted = SrgmParams(kind, tuple(np.exp(result.x)))
    return SrgmFitResult(
        kind=kind,
        params=fitted,
        sse=float(result.fun),
        iterations=int(result.nit),
        converged=bool(result.success),
    )


def srgm_compare(
    cumulative: Sequence[tuple[float, float]],
    kinds: Sequence[SrgmKind] = MEAN_VALUE_KINDS,
) -> list[SrgmFitResult]:
    """Fit each kind and rank by SSE, ties broken by fewer parameters."""
    results = [srgm_fit(kind, cumulative) for kind in kinds]
    order = list(MEAN_VALUE_KINDS)
    results.sort(
        key=lambda r: (r.sse, len(PARAM_NAMES[r.kind]), order.index(r.kind))
    )
    return results
