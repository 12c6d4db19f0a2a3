"""CDF trimming and distribution ranking by K-S p-value."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..errors import SpikecastError
from ..series import TimeSeries, normalize
from .distributions import ALL_KINDS, DistKind, DistParams, dist_fit
from .kstest import KsResult, ks_test


@dataclass(frozen=True)
class DistRankingEntry:
    kind: DistKind
    params: DistParams | None
    ks: KsResult
    note: str | None = None


@dataclass(frozen=True)
class DistRanking:
    """Entries ordered by descending K-S p-value, one per requested kind."""

    entries: tuple[DistRankingEntry, ...]


def trim_cdf(points: Sequence[float]) -> list[float]:
    """Drop redundant flat ends of a CDF curve.

    Leading exact-0 entries are removed except the last one; trailing
    exact-1 entries are removed except the first one.  Idempotent.
    """
    pts = [float(p) for p in points]
    for i, (a, b) in enumerate(zip(pts, pts[1:])):
        if b < a:
            raise ValueError(f"CDF points must be non-decreasing (position {i + 1})")
    for p in pts:
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"CDF points must lie in [0, 1], got {p!r}")
    start = 0
    while start + 1 < len(pts) and pts[start + 1] == 0.0:
        start += 1
    end = len(pts)
    while end - 1 > start and pts[end - 2] == 1.0:
        end -= 1
    return pts[start:end]


def cdf_samples(series: TimeSeries) -> list[float]:
    """Samples for distribution fitting: the trimmed cumulative share curve.

    Pipeline: normalize, cumulative sum, trim flat ends.
    """
    ratios = normalize(series).ratios
    cumulative = []
    total = 0.0
    for r in ratios:
        total += r
        cumulative.append(min(total, 1.0))
    cumulative[-1] = 1.0
    return trim_cdf(cumulative)


def rank_distributions(
    samples: Sequence[float], kinds: Sequence[DistKind] = ALL_KINDS
) -> DistRanking:
    """Fit each kind, test it, and sort by p-value (descending).

    Kinds whose fit fails are kept in the ranking with p = 0 and the failure
    message in ``note``.  Ties keep the requested kind order.
    """
    entries = []
    for position, kind in enumerate(kinds):
        try:
            params = dist_fit(kind, samples)
            ks = ks_test(samples, kind, params)
            entries.append((position, DistRankingEntry(kind, params, ks)))
        except SpikecastError as exc:
            failed = KsResult(d_stat=1.0, p_value=0.0, n=len(samples))
            entries.append(
                (position, DistRankingEntry(kind, None, failed, note=str(exc)))
            )
    entries.sort(key=lambda item: (-item[1].ks.p_value, item[0]))
    return DistRanking(entries=tuple(entry for _, entry in entries))
