"""Core time-series containers, transforms, and forecast accuracy metrics.

Everything in this module is a pure function over immutable values, so the
API is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    AllZeroSeries,
    EmptyInput,
    FinerTarget,
    LengthMismatch,
    NegativeInput,
)


class Granularity(enum.Enum):
    """Aggregation level of a count series, finest to coarsest."""

    DAILY = "daily"
    WEEKLY = "weekly"
    MONTHLY = "monthly"
    QUARTERLY = "quarterly"


# Fixed bucket factors between adjacent granularities (no calendar alignment):
# 7 days per week, 4 weeks per month, 3 months per quarter.
_GRAIN_ORDER = (
    Granularity.DAILY,
    Granularity.WEEKLY,
    Granularity.MONTHLY,
    Granularity.QUARTERLY,
)
_STEP_FACTOR = {
    Granularity.DAILY: 7,
    Granularity.WEEKLY: 4,
    Granularity.MONTHLY: 3,
}


@dataclass(frozen=True)
class TimeSeries:
    """An ordered sequence of per-period event counts.

    Values are non-negative reals (raw counts or already-normalized data).
    ``start_index`` is the absolute period offset of the first value, used
    for calendar-derived covariates (index 0 is treated as a January).
    """

    values: tuple[float, ...]
    granularity: Granularity = Granularity.MONTHLY
    start_index: int = 0
    label: str = ""

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if len(vals) == 0:
            raise ValueError("a series must contain at least one value")
        for i, v in enumerate(vals):
            if not math.isfinite(v):
                raise ValueError(f"series value at position {i} is not finite")
            if v < 0:
                raise ValueError(f"series value at position {i} is negative")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def total(self) -> float:
        return float(sum(self.values))


@dataclass(frozen=True)
class NormalizedSeries:
    """A series rescaled so that its values sum to one.

    ``normalizer`` is the divisor (the original series total), kept so the
    original scale can be reconstructed.
    """

    ratios: tuple[float, ...]
    normalizer: float

    def __post_init__(self) -> None:
        if self.normalizer <= 0:
            raise ValueError("normalizer must be positive")
        s = sum(self.ratios)
        if abs(s - 1.0) > 1e-9:
            raise ValueError(f"ratios sum to {s!r}, expected 1 within 1e-9")

    def denormalize(self) -> tuple[float, ...]:
        return tuple(r * self.normalizer for r in self.ratios)


@dataclass(frozen=True)
class Forecast:
    """A block of predicted values starting at ``origin_index``."""

    origin_index: int
    values: tuple[float, ...]
    horizon: int

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ValueError("horizon must be a positive integer")
        if len(self.values) != self.horizon:
            raise ValueError(
                f"forecast has {len(self.values)} values for horizon {self.horizon}"
            )
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))


@dataclass(frozen=True)
class MetricSet:
    """Forecast accuracy metrics over one actual/predicted pairing.

    ``mape`` averages per-period absolute percentage errors over periods with
    a positive actual; ``sum_error_pct`` is the signed relative error of the
    totals.  Either is ``None`` when its denominator vanishes.
    """

    mae: float
    mse: float
    rmse: float
    mape: float | None
    sum_error_pct: float | None

    def __post_init__(self) -> None:
        for name in ("mae", "mse", "rmse"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be a finite non-negative real")
        if abs(self.rmse * self.rmse - self.mse) > 1e-12 * max(self.mse, 1.0):
            raise ValueError("rmse**2 must equal mse")


def normalize(series: TimeSeries) -> NormalizedSeries:
    """Divide every value by the series total.

    Raises:
        AllZeroSeries: if the series sums to zero.
    """
    total = series.total()
    if total <= 0:
        raise AllZeroSeries("cannot normalize a series that sums to zero")
    return NormalizedSeries(
        ratios=tuple(v / total for v in series.values),
        normalizer=total,
    )


def compute_metrics(
    actual: Sequence[float], predicted: Sequence[float]
) -> MetricSet:
    """Compute MAE, MSE, RMSE, MAPE, and the signed total-error percentage.

    Args:
        actual: Ground-truth values.
        predicted: Predicted values, same length as ``actual``.

    Raises:
        EmptyInput: if the sequences are empty.
        LengthMismatch: if the lengths differ.
    """
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.size == 0 or p.size == 0:
        raise EmptyInput("metrics require at least one observation")
    if a.shape != p.shape:
        raise LengthMismatch(
            f"actual has {a.size} values but predicted has {p.size}"
        )
    diff = a - p
    mae = float(np.mean(np.abs(diff)))
    mse = float(np.mean(diff * diff))
    rmse = math.sqrt(mse)
    pos = a > 0
    mape = float(np.mean(np.abs(diff[pos]) / a[pos])) if np.any(pos) else None
    total_actual = float(np.sum(a))
    if total_actual > 0:
        sum_error_pct = (float(np.sum(p)) - total_actual) / total_actual
    else:
        sum_error_pct = None
    return MetricSet(mae=mae, mse=mse, rmse=rmse, mape=mape, sum_error_pct=sum_error_pct)


def log1p_forward(x: float) -> float:
    """Map a non-negative sample value to log(1 + x).

    Raises:
        NegativeInput: if ``x`` is negative.
    """
    if x < 0:
        raise NegativeInput(f"log1p transform requires x >= 0, got {x!r}")
    return math.log1p(x)


def log1p_inverse(y: float) -> float:
    """Invert :func:`log1p_forward`: exp(y) - 1.

    The result may be negative for negative ``y``; clamping to zero is a
    separate, later step (see :func:`floor_zero`).
    """
    return math.expm1(y)


def floor_zero(forecast: Forecast) -> Forecast:
    """Clamp negative predicted values to 0, preserving origin and horizon."""
    return Forecast(
        origin_index=forecast.origin_index,
        values=tuple(max(v, 0.0) for v in forecast.values),
        horizon=forecast.horizon,
    )


def aggregation_factor(source: Granularity, target: Granularity) -> int:
    """Number of source periods per target period.

    Raises:
        FinerTarget: if ``target`` is not strictly coarser than ``source``.
    """
    si = _GRAIN_ORDER.index(source)
    ti = _GRAIN_ORDER.index(target)
    if ti <= si:
        raise FinerTarget(
            f"target granularity {target.value} is not coarser than {source.value}"
        )
    factor = 1
    for grain in _GRAIN_ORDER[si:ti]:
        factor *= _STEP_FACTOR[grain]
    return factor


def aggregate(series: TimeSeries, target: Granularity) -> TimeSeries:
    """Sum the series into coarser buckets; a trailing partial bucket is dropped.

    Bucket boundaries are counted from the head of the series, so the output
    ``start_index`` restarts at 0.
    """
    factor = aggregation_factor(series.granularity, target)
    buckets = len(series.values) // factor
    if buckets == 0:
        raise EmptyInput(
            f"series of length {len(series)} has no complete {target.value} bucket"
        )
    values = tuple(
        float(sum(series.values[k * factor : (k + 1) * factor]))
        for k in range(buckets)
    )
    return TimeSeries(
        values=values, granularity=target, start_index=0, label=series.label
    )
