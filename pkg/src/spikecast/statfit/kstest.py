"""One-sample Kolmogorov-Smirnov goodness-of-fit test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import EmptySamples
from .distributions import DistKind, DistParams, cdf_values


@dataclass(frozen=True)
class KsResult:
    """K-S distance, its asymptotic p-value, and the sample count."""

    d_stat: float
    p_value: float
    n: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.d_stat <= 1.0:
            raise ValueError(f"d_stat must be in [0, 1], got {self.d_stat!r}")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value must be in [0, 1], got {self.p_value!r}")


def kolmogorov_sf(z: float) -> float:
    """Survival function of the Kolmogorov distribution.

    Q(z) = 2 * sum_{j>=1} (-1)^(j-1) exp(-2 j^2 z^2), clamped into [0, 1].
    """
    if z <= 0.0:
        return 1.0
    total = 0.0
    sign = 1.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * z * z)
        total += sign * term
        if term <= 1e-16 * max(total, 1e-300) or j > 200:
            break
        sign = -sign
        j += 1
    return min(max(2.0 * total, 0.0), 1.0)


def ks_test(
    samples: Sequence[float], kind: DistKind, params: DistParams
) -> KsResult:
    """Test samples against a fitted distribution.

    The statistic is the largest gap between the empirical step function and
    the theoretical CDF, checked on both sides of each step.  The p-value
    uses the asymptotic Kolmogorov distribution with the standard
    finite-sample correction sqrt(n) + 0.12 + 0.11/sqrt(n).
    """
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n == 0:
        raise EmptySamples("K-S test needs at least one sample")
    cdf = cdf_values(kind, params, x)
    steps_hi = np.arange(1, n + 1) / n
    steps_lo = np.arange(0, n) / n
    d_plus = float(np.max(steps_hi - cdf))
    d_minus = float(np.max(cdf - steps_lo))
    d = max(d_plus, d_minus)
    en = math.sqrt(n)
    p = kolmogorov_sf((en + 0.12 + 0.11 / en) * d)
    return KsResult(d_stat=min(max(d, 0.0), 1.0), p_value=p, n=int(n))
