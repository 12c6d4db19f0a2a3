"""spikecast: forecasting and reliability analysis for sporadic, spiky count series.

The toolkit bundles four forecaster families (previous value, moving
average, autoregression with exogenous inputs, and a foundation-model
bridge client), rolling and iterated multi-step evaluation protocols,
classic software reliability growth models, distribution curve fitting with
K-S ranking, stationarity testing, and seeded synthetic data generators.
"""

from .bridge import BridgeClient, default_stub_command, stub_forecast
from .errors import SpikecastError
from .harness import (
    RollingEvalResult,
    SplitSpec,
    SweepReport,
    YearEndTable,
    ims_forecast,
    lag_sweep,
    rolling_eval,
    select_best,
    year_end_table,
)
from .models import (
    ArModel,
    ExogenousSpec,
    Forecaster,
    ForecasterConfig,
    ModelKind,
    ar_fit,
    ar_predict,
    fit_predict_one,
    ma_predict,
    make_forecaster,
    pv_predict,
)
from .series import (
    Forecast,
    Granularity,
    MetricSet,
    NormalizedSeries,
    TimeSeries,
    aggregate,
    compute_metrics,
    floor_zero,
    log1p_forward,
    log1p_inverse,
    normalize,
)
from .srgm import (
    SrgmFitResult,
    SrgmKind,
    SrgmParams,
    go_imperfect_hazard,
    jm_hazard,
    srgm_compare,
    srgm_fit,
    srgm_intensity,
    srgm_mean,
    srgm_remaining,
)
from .statfit import (
    AdfResult,
    DistKind,
    DistParams,
    DistRanking,
    KsResult,
    adf_test,
    cdf_samples,
    dist_cdf,
    dist_fit,
    ks_test,
    rank_distributions,
    trim_cdf,
)
from .synthgen import PatternKind, PatternSpec, SuiteSpec, generate, generate_suite

__version__ = "0.1.0"

__all__ = [
    "AdfResult",
    "ArModel",
    "BridgeClient",
    "DistKind",
    "DistParams",
    "DistRanking",
    "ExogenousSpec",
    "Forecast",
    "Forecaster",
    "ForecasterConfig",
    "Granularity",
    "KsResult",
    "MetricSet",
    "ModelKind",
    "NormalizedSeries",
    "PatternKind",
    "PatternSpec",
    "RollingEvalResult",
    "SpikecastError",
    "SplitSpec",
    "SrgmFitResult",
    "SrgmKind",
    "SrgmParams",
    "SuiteSpec",
    "SweepReport",
    "TimeSeries",
    "YearEndTable",
    "adf_test",
    "aggregate",
    "ar_fit",
    "ar_predict",
    "cdf_samples",
    "compute_metrics",
    "default_stub_command",
    "dist_cdf",
    "dist_fit",
    "fit_predict_one",
    "floor_zero",
    "generate",
    "generate_suite",
    "go_imperfect_hazard",
    "ims_forecast",
    "jm_hazard",
    "ks_test",
    "lag_sweep",
    "log1p_forward",
    "log1p_inverse",
    "ma_predict",
    "make_forecaster",
    "normalize",
    "pv_predict",
    "rank_distributions",
    "rolling_eval",
    "select_best",
    "srgm_compare",
    "srgm_fit",
    "srgm_intensity",
    "srgm_mean",
    "srgm_remaining",
    "stub_forecast",
    "trim_cdf",
    "year_end_table",
]
