"""Evaluation protocols: rolling one-step backtests, lag sweeps, iterated
multi-step forecasting, and fiscal-year-end estimation tables.

All protocols use an expanding window: the model is refitted before every
prediction on every observation available up to (but never including) the
step being predicted.  Models see raw counts; normalization enters only when
error metrics are computed, using the full series total as the scale.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .bridge import BridgeClient
from .errors import AllZeroSeries, EmptyReport, InsufficientHistory
from .models import (
    KIND_ORDER,
    ExogenousSpec,
    Forecaster,
    ForecasterConfig,
    ModelKind,
    build_exog_design,
    make_forecaster,
    min_history_length,
)
from .series import Forecast, MetricSet, TimeSeries, compute_metrics, normalize

SWEEP_METRICS = ("mae", "mse", "rmse")


@dataclass(frozen=True)
class SplitSpec:
    """Exclusive end indices of the train, validation, and test regions."""

    train_end: int
    validation_end: int
    test_end: int

    def __post_init__(self) -> None:
        if not 0 < self.train_end <= self.validation_end <= self.test_end:
            raise ValueError(
                "split must satisfy 0 < train_end <= validation_end <= test_end"
            )

    def check(self, length: int) -> None:
        if self.test_end > length:
            raise ValueError(
                f"split test_end {self.test_end} exceeds series length {length}"
            )

    def test_indices(self) -> range:
        return range(self.validation_end, self.test_end)


@dataclass(frozen=True)
class StepRecord:
    index: int
    actual: float
    predicted: float


@dataclass(frozen=True)
class RollingEvalResult:
    """Per-step predictions plus metrics on the normalized scale."""

    config: ForecasterConfig
    per_step: tuple[StepRecord, ...]
    metrics: MetricSet


@dataclass(frozen=True)
class SweepRow:
    kind: ModelKind
    lag: int
    mae: float
    mse: float
    rmse: float

    def metric(self, name: str) -> float:
        return getattr(self, name)


@dataclass(frozen=True)
class SweepReport:
    """One row per (kind, lag) cell with normalized error metrics."""

    rows: tuple[SweepRow, ...]
    best: Mapping[str, tuple[ModelKind, int]]
    notices: tuple[str, ...] = ()


@dataclass(frozen=True)
class YearEndRow:
    """One estimate of the fiscal year made ``months_ahead`` months early.

    ``months_ahead`` is negative: -12 means nothing of the year was known
    yet, -1 means all but the last month was known.  The first
    ``12 + months_ahead`` values are actuals, the rest are iterated
    forecasts.
    """

    months_ahead: int
    values: tuple[float, ...]
    total: float
    error_pct: float


@dataclass(frozen=True)
class YearEndTable:
    actual_values: tuple[float, ...]
    actual_total: float
    rows: tuple[YearEndRow, ...]


def _exog_design_for(
    config: ForecasterConfig, series: TimeSeries, length: int
) -> np.ndarray | None:
    """Exogenous rows for series positions 0..length, or None when unused."""
    spec: ExogenousSpec | None = config.exogenous
    if spec is None or spec.width == 0 or config.kind is not ModelKind.AR:
        return None
    return build_exog_design(spec, series.start_index, length)


def _predict_at(
    forecaster: Forecaster,
    values: Sequence[float],
    position: int,
    exog: np.ndarray | None,
) -> float:
    history = list(values[:position])
    if exog is not None:
        return forecaster.predict_one(
            history, exog_history=exog[:position], exog_next=exog[position]
        )
    return forecaster.predict_one(history)


def rolling_eval(
    series: TimeSeries,
    config: ForecasterConfig,
    split: SplitSpec,
    fm_backend: BridgeClient | None = None,
) -> RollingEvalResult:
    """Expanding-window, one-step-ahead backtest over the test region.

    For each test index i the model is fitted on raw counts [0..i) and asked
    for one step; metrics are computed after dividing both actual and
    predicted values by the full-series normalizer.
    """
    split.check(len(series))
    test_idx = split.test_indices()
    if len(test_idx) == 0:
        raise ValueError("split has an empty test region")
    needed = min_history_length(config)
    if test_idx[0] < needed:
        raise InsufficientHistory(
            f"{config.kind.value} with lag {config.lag} needs {needed} observations "
            f"before the first test index, got {test_idx[0]}"
        )
    forecaster = make_forecaster(config, fm_backend)
    exog = _exog_design_for(config, series, len(series))
    per_step = []
    for i in test_idx:
        predicted = _predict_at(forecaster, series.values, i, exog)
        per_step.append(StepRecord(index=i, actual=series.values[i], predicted=predicted))
    scale = normalize(series).normalizer
    metrics = compute_metrics(
        [s.actual / scale for s in per_step],
        [s.predicted / scale for s in per_step],
    )
    return RollingEvalResult(config=config, per_step=tuple(per_step), metrics=metrics)


def lag_sweep(
    series: TimeSeries,
    kinds: Sequence[ModelKind],
    lag_range: Sequence[int],
    split: SplitSpec,
    fm_backend: BridgeClient | None = None,
    use_log1p: bool = False,
    use_floor0: bool = False,
    fm_freq: int = 0,
) -> SweepReport:
    """Run one rolling evaluation per (kind, lag) cell.

    PV is evaluated only at lag 1.  FM cells are skipped with a notice when
    no backend is supplied.
    """
    lags = sorted(set(int(lag) for lag in lag_range))
    if any(lag < 1 for lag in lags):
        raise ValueError("lags must be >= 1")
    rows: list[SweepRow] = []
    notices: list[str] = []
    for kind in KIND_ORDER:
        if kind not in kinds:
            continue
        if kind is ModelKind.FM and fm_backend is None:
            notices.append("fm rows skipped: no bridge backend supplied")
            continue
        kind_lags = [1] if kind is ModelKind.PV else lags
        for lag in kind_lags:
            config = ForecasterConfig(
                kind=kind,
                lag=lag,
                use_log1p=use_log1p,
                use_floor0=use_floor0,
                fm_freq=fm_freq,
            )
            result = rolling_eval(series, config, split, fm_backend)
            rows.append(
                SweepRow(
                    kind=kind,
                    lag=lag,
                    mae=result.metrics.mae,
                    mse=result.metrics.mse,
                    rmse=result.metrics.rmse,
                )
            )
    report = SweepReport(rows=tuple(rows), best={}, notices=tuple(notices))
    if not rows:
        return report
    best = {metric: select_best(report, metric) for metric in SWEEP_METRICS}
    return SweepReport(rows=report.rows, best=best, notices=report.notices)


def select_best(report: SweepReport, metric: str) -> tuple[ModelKind, int]:
    """Deterministic argmin row: ties prefer a smaller lag, then kind order."""
    if metric not in SWEEP_METRICS:
        raise ValueError(f"metric must be one of {SWEEP_METRICS}, got {metric!r}")
    if not report.rows:
        raise EmptyReport("cannot select from an empty sweep report")
    best = min(
        report.rows,
        key=lambda row: (row.metric(metric), row.lag, KIND_ORDER.index(row.kind)),
    )
    return best.kind, best.lag


def ims_forecast(
    series: TimeSeries,
    config: ForecasterConfig,
    horizon: int,
    fm_backend: BridgeClient | None = None,
) -> Forecast:
    """Iterated multi-step forecast.

    Runs fit-predict-one ``horizon`` times, appending each prediction to the
    working history (and refitting) before the next step.  Output values are
    in the raw count scale of the input series.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    needed = min_history_length(config)
    if len(series) < needed:
        raise InsufficientHistory(
            f"{config.kind.value} with lag {config.lag} needs {needed} observations, "
            f"got {len(series)}"
        )
    forecaster = make_forecaster(config, fm_backend)
    work = list(series.values)
    exog = _exog_design_for(config, series, len(series) + horizon)
    predictions = []
    for _ in range(horizon):
        value = _predict_at(forecaster, work, len(work), exog)
        predictions.append(value)
        work.append(value)
    return Forecast(
        origin_index=series.start_index + len(series),
        values=tuple(predictions),
        horizon=horizon,
    )


def year_end_table(
    series: TimeSeries,
    config: ForecasterConfig,
    fiscal_window: Sequence[int],
    fm_backend: BridgeClient | None = None,
) -> YearEndTable:
    """Estimate a 12-month fiscal window from every possible month boundary.

    ``fiscal_window`` is the 12 consecutive series positions that make up
    the fiscal year.  Row A (-12..-1) treats the first 12+A window months as
    known actuals and forecasts the remaining -A months by iterated
    multi-step forecasting, refitting at every step.
    """
    window = [int(i) for i in fiscal_window]
    if len(window) != 12 or window != list(range(window[0], window[0] + 12)):
        raise ValueError("fiscal_window must be 12 consecutive series positions")
    start = window[0]
    if start < 1 or window[-1] >= len(series):
        raise ValueError("fiscal_window must lie inside the series after some history")
    actual_values = tuple(series.values[start : start + 12])
    actual_total = float(sum(actual_values))
    if actual_total <= 0:
        raise AllZeroSeries("fiscal window sums to zero; error percentages undefined")

    rows = []
    for months_ahead in range(-12, 0):
        known = 12 + months_ahead
        prefix_length = start + known
        prefix = TimeSeries(
            values=series.values[:prefix_length],
            granularity=series.granularity,
            start_index=series.start_index,
            label=series.label,
        )
        forecast = ims_forecast(prefix, config, horizon=-months_ahead, fm_backend=fm_backend)
        values = actual_values[:known] + forecast.values
        total = float(sum(values))
        rows.append(
            YearEndRow(
                months_ahead=months_ahead,
                values=values,
                total=total,
                error_pct=(total - actual_total) / actual_total,
            )
        )
    return YearEndTable(
        actual_values=actual_values,
        actual_total=actual_total,
        rows=tuple(rows),
    )
