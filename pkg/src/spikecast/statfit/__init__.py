"""Distribution curve fitting, K-S ranking, and stationarity testing."""

from .adf import AdfResult, adf_test, default_max_lag
from .distributions import (
    DistKind,
    DistParams,
    dist_cdf,
    dist_fit,
    dist_loglik,
)
from .kstest import KsResult, ks_test
from .ranking import (
    DistRanking,
    DistRankingEntry,
    cdf_samples,
    rank_distributions,
    trim_cdf,
)

__all__ = [
    "AdfResult",
    "DistKind",
    "DistParams",
    "DistRanking",
    "DistRankingEntry",
    "KsResult",
    "adf_test",
    "cdf_samples",
    "default_max_lag",
    "dist_cdf",
    "dist_fit",
    "dist_loglik",
    "ks_test",
    "rank_distributions",
    "trim_cdf",
]
