"""Forecasting model families behind a single fit/predict surface.

Four kinds are supported: previous-value (PV), moving average (MA),
autoregression with optional exogenous inputs (AR), and a foundation-model
client (FM) that delegates to an external bridge process.

PV is the lag-1 special case of MA.  AR is the linear model

    o_i = b + sum_j c_j * o_(i-j) + <exog terms> + noise

fitted by conditional least squares: the first ``lag`` observations seed the
lagged regressors and the remaining rows are solved by ordinary least
squares (minimum-norm solution when the design is rank deficient).

Fitted models are immutable and safe to share across threads.  The FM client
serializes requests to its backend, so parallel FM evaluation needs one
backend connection per worker.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bridge import BridgeClient
from .errors import (
    EmptyHistory,
    ExogMismatch,
    InsufficientHistory,
    MissingBackend,
    NonFiniteInput,
)
from .series import log1p_forward, log1p_inverse


class ModelKind(enum.Enum):
    PV = "pv"
    MA = "ma"
    AR = "ar"
    FM = "fm"


# Deterministic ordering used for tie-breaks in reports.
KIND_ORDER = (ModelKind.PV, ModelKind.MA, ModelKind.AR, ModelKind.FM)


@dataclass(frozen=True)
class ExogenousSpec:
    """Calendar covariates available to the AR model.

    ``month_of_year`` expands to a 12-category one-hot with the first
    category dropped (avoids collinearity with the intercept).
    ``code_freeze_month`` marks one month per year with a 0/1 indicator.
    """

    month_of_year: bool = False
    code_freeze_month: int | None = None

    def __post_init__(self) -> None:
        if self.code_freeze_month is not None and not (
            1 <= self.code_freeze_month <= 12
        ):
            raise ValueError("code_freeze_month must be in 1..12")

    @property
    def width(self) -> int:
        cols = 11 if self.month_of_year else 0
        if self.code_freeze_month is not None:
            cols += 1
        return cols


@dataclass(frozen=True)
class ForecasterConfig:
    """Model selection plus the optional transforms applied around it."""

    kind: ModelKind
    lag: int = 1
    use_log1p: bool = False
    use_floor0: bool = False
    exogenous: ExogenousSpec | None = None
    fm_freq: int = 0

    def __post_init__(self) -> None:
        if self.kind is ModelKind.PV:
            object.__setattr__(self, "lag", 1)
        if self.lag < 1:
            raise ValueError("lag must be >= 1")
        if self.fm_freq not in (0, 1):
            raise ValueError("fm_freq must be 0 or 1")


@dataclass(frozen=True)
class ArModel:
    """Fitted autoregression coefficients and fit diagnostics.

    ``residual_variance`` estimates the variance of the white-noise term
    (SSE over residual degrees of freedom).
    """

    intercept: float
    coefficients: tuple[float, ...]
    exog_coefficients: tuple[float, ...]
    residual_variance: float
    n_obs: int

    def __post_init__(self) -> None:
        if self.residual_variance < 0:
            raise ValueError("residual_variance must be >= 0")

    @property
    def lag(self) -> int:
        return len(self.coefficients)


def pv_predict(history: Sequence[float]) -> float:
    """Predict the next value as the previous value."""
    if len(history) == 0:
        raise EmptyHistory("previous-value prediction needs at least one sample")
    return float(history[-1])


def ma_predict(history: Sequence[float], lag: int) -> float:
    """Predict the next value as the mean of the last ``lag`` values."""
    if lag < 1:
        raise ValueError("lag must be >= 1")
    if len(history) < lag:
        raise InsufficientHistory(
            f"moving average with lag {lag} needs {lag} samples, got {len(history)}"
        )
    window = history[len(history) - lag :]
    return float(sum(window) / lag)


def _check_finite(values: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(values)):
        raise NonFiniteInput(f"{what} contains NaN or infinite values")


def ar_fit(
    history: Sequence[float],
    lag: int,
    exog: np.ndarray | Sequence[Sequence[float]] | None = None,
) -> ArModel:
    """Fit the AR(lag) model by conditional least squares.

    Args:
        history: Observations, oldest first.
        lag: Number of autoregressive terms.
        exog: Optional design columns aligned to ``history`` (one row per
            observation); only rows from index ``lag`` onward enter the fit.

    Raises:
        InsufficientHistory: fewer usable rows than unknowns.
        NonFiniteInput: NaN or infinity in the inputs.
    """
    if lag < 1:
        raise ValueError("lag must be >= 1")
    y_all = np.asarray(history, dtype=float)
    _check_finite(y_all, "history")
    n = y_all.size
    rows = n - lag
    exog_mat = None
    n_exog = 0
    if exog is not None:
        exog_mat = np.asarray(exog, dtype=float)
        if exog_mat.ndim == 1:
            exog_mat = exog_mat.reshape(-1, 1)
        _check_finite(exog_mat, "exogenous design")
        if exog_mat.shape[0] != n:
            raise ExogMismatch(
                f"exogenous design has {exog_mat.shape[0]} rows for {n} observations"
            )
        n_exog = exog_mat.shape[1]
    unknowns = 1 + lag + n_exog
    if rows < unknowns:
        raise InsufficientHistory(
            f"AR({lag}) with {n_exog} exogenous columns needs at least "
            f"{lag + unknowns} observations, got {n}"
        )

    design = np.empty((rows, unknowns))
    design[:, 0] = 1.0
    for j in range(1, lag + 1):
        # column j holds o_(i-j) for target row i
        design[:, j] = y_all[lag - j : n - j]
    if exog_mat is not None:
        design[:, 1 + lag :] = exog_mat[lag:, :]
    target = y_all[lag:]

    coef, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
    residuals = target - design @ coef
    sse = float(residuals @ residuals)
    dof = rows - unknowns
    residual_variance = sse / dof if dof > 0 else 0.0
    return ArModel(
        intercept=float(coef[0]),
        coefficients=tuple(float(c) for c in coef[1 : 1 + lag]),
        exog_coefficients=tuple(float(c) for c in coef[1 + lag :]),
        residual_variance=max(residual_variance, 0.0),
        n_obs=rows,
    )


def ar_predict(
    model: ArModel,
    history: Sequence[float],
    exog_next: Sequence[float] | None = None,
) -> float:
    """Evaluate the fitted AR equation one step past the end of ``history``."""
    lag = model.lag
    if len(history) < lag:
        raise InsufficientHistory(
            f"AR({lag}) prediction needs {lag} samples, got {len(history)}"
        )
    if model.exog_coefficients:
        if exog_next is None:
            raise ExogMismatch("model has exogenous coefficients but no exog_next row")
        if len(exog_next) != len(model.exog_coefficients):
            raise ExogMismatch(
                f"exog_next has {len(exog_next)} values, model expects "
                f"{len(model.exog_coefficients)}"
            )
    elif exog_next is not None and len(exog_next) > 0:
        raise ExogMismatch("model has no exogenous coefficients but exog_next given")

    value = model.intercept
    for j, c in enumerate(model.coefficients, start=1):
        value += c * float(history[len(history) - j])
    if model.exog_coefficients:
        for c, x in zip(model.exog_coefficients, exog_next):
            value += c * float(x)
    return float(value)


def build_exog_design(
    spec: ExogenousSpec, start_index: int, length: int
) -> np.ndarray:
    """Build the exogenous design rows for periods start_index..start_index+length.

    Periods are interpreted as months with absolute index 0 being a January.
    """
    design = np.zeros((length, spec.width))
    col = 0
    for row in range(length):
        month = (start_index + row) % 12 + 1
        c = col
        if spec.month_of_year:
            if month >= 2:  # first category (January) dropped
                design[row, c + month - 2] = 1.0
            c += 11
        if spec.code_freeze_month is not None:
            design[row, c] = 1.0 if month == spec.code_freeze_month else 0.0
    return design


class Forecaster:
    """One-step forecaster contract.

    ``predict_one`` fits on the full history passed to the call (expanding
    window) and returns the next value with the configured transforms
    applied: log1p wraps inputs/outputs when enabled, and the 0-floor is
    applied last.
    """

    def __init__(self, config: ForecasterConfig):
        self.config = config

    def predict_one(
        self,
        history: Sequence[float],
        exog_history: np.ndarray | None = None,
        exog_next: Sequence[float] | None = None,
    ) -> float:
        if len(history) == 0:
            raise EmptyHistory("cannot forecast from an empty history")
        if self.config.use_log1p:
            work = [log1p_forward(v) for v in history]
        else:
            work = [float(v) for v in history]
        raw = self._predict_core(work, exog_history, exog_next)
        if self.config.use_log1p:
            raw = log1p_inverse(raw)
        if self.config.use_floor0:
            raw = max(raw, 0.0)
        return float(raw)

    def _predict_core(
        self,
        history: list[float],
        exog_history: np.ndarray | None,
        exog_next: Sequence[float] | None,
    ) -> float:
        raise NotImplementedError


class MovingAverageForecaster(Forecaster):
    """PV and MA: the mean of the trailing ``lag`` values (PV has lag 1)."""

    def _predict_core(self, history, exog_history, exog_next):
        return ma_predict(history, self.config.lag)


class AutoRegressiveForecaster(Forecaster):
    """AR(lag): refits by least squares on every call."""

    def _predict_core(self, history, exog_history, exog_next):
        model = ar_fit(history, self.config.lag, exog_history)
        return ar_predict(model, history, exog_next if model.exog_coefficients else None)


class BridgeForecaster(Forecaster):
    """FM: zero-shot prediction through an external bridge backend.

    The context sent to the backend is the trailing ``lag`` values of the
    (transformed) history; exogenous covariates are never forwarded.
    """

    def __init__(self, config: ForecasterConfig, backend: BridgeClient):
        super().__init__(config)
        self.backend = backend

    def _predict_core(self, history, exog_history, exog_next):
        context = history[max(0, len(history) - self.config.lag) :]
        values = self.backend.forecast(context, horizon=1, freq=self.config.fm_freq)
        return float(values[0])


def make_forecaster(
    config: ForecasterConfig, fm_backend: BridgeClient | None = None
) -> Forecaster:
    """Build the forecaster for ``config``.

    Raises:
        MissingBackend: for FM configs without a backend handle.
    """
    if config.kind in (ModelKind.PV, ModelKind.MA):
        return MovingAverageForecaster(config)
    if config.kind is ModelKind.AR:
        return AutoRegressiveForecaster(config)
    if config.kind is ModelKind.FM:
        if fm_backend is None:
            raise MissingBackend("FM forecaster requires a bridge backend")
        return BridgeForecaster(config, fm_backend)
    raise ValueError(f"unknown model kind {config.kind!r}")


def fit_predict_one(
    forecaster: Forecaster,
    history: Sequence[float],
    exog_next: Sequence[float] | None = None,
    exog_history: np.ndarray | None = None,
) -> float:
    """Fit on the full history and return the one-step-ahead prediction."""
    return forecaster.predict_one(history, exog_history=exog_history, exog_next=exog_next)


def min_history_length(config: ForecasterConfig) -> int:
    """Shortest history that satisfies the kind's fit requirement."""
    if config.kind in (ModelKind.PV, ModelKind.MA, ModelKind.FM):
        return max(config.lag, 1)
    n_exog = config.exogenous.width if config.exogenous is not None else 0
    # conditional least squares: (n - lag) rows must cover 1 + lag + n_exog unknowns
    return 2 * config.lag + 1 + n_exog


def history_is_sufficient(config: ForecasterConfig, length: int) -> bool:
    return length >= min_history_length(config)
