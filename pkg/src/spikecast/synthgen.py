"""Seeded generators for sporadic and spiky count patterns.

Randomness comes from a splitmix64 stream (increment 0x9E3779B97F4A7C15,
mixers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB) driven entirely by 64-bit
integer arithmetic, so identical specs produce byte-identical series on any
platform.  Counts are drawn by Poisson inversion on that stream.

Each pattern is a deterministic intensity curve (spike positions come from
the seed) plus optional sampling noise: with ``noise_level`` 0 the exact
real-valued intensity is returned; with ``noise_level`` > 0 each period
draws an integer count from a Poisson law whose mean is the intensity with
a uniform jitter of relative width ``noise_level``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvalidSpec
from .series import Granularity, TimeSeries

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit PRNG with integer-only state."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform draw in [0, 1)."""
        return self.next_u64() / 2.0**64

    def next_int(self, bound: int) -> int:
        """Uniform integer in [0, bound)."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        return self.next_u64() % bound

    def poisson(self, mean: float) -> int:
        """Poisson draw by CDF inversion; exact for the small means used here."""
        if mean <= 0.0:
            return 0
        u = self.next_float()
        prob = math.exp(-mean)
        cum = prob
        k = 0
        limit = int(mean + 10.0 * math.sqrt(mean) + 50.0)
        while u >= cum and k < limit:
            k += 1
            prob *= mean / k
            cum += prob
        return k


class PatternKind(enum.Enum):
    DOUBLE_SPIKE = "double_spike"
    SMOOTH_DECAY_SPIKE = "smooth_decay_spike"
    STATIONARY_SPARSE = "stationary_sparse"
    TREND_WITH_SPIKES = "trend_with_spikes"
    REGIME_SHIFT = "regime_shift"


@dataclass(frozen=True)
class PatternSpec:
    kind: PatternKind
    length: int = 84
    base_rate: float = 1.0
    spike_amplitude: float = 6.0
    spike_width: int = 3
    noise_level: float = 0.3
    seed: int = 0

    def __post_init__(self) -> None:
        if self.length < 12:
            raise InvalidSpec(f"length must be >= 12, got {self.length}")
        if self.base_rate < 0 or self.spike_amplitude < 0 or self.noise_level < 0:
            raise InvalidSpec("magnitudes must be >= 0")
        if self.spike_width < 1:
            raise InvalidSpec(f"spike_width must be >= 1, got {self.spike_width}")


def _bump(center: int, width: float, t: int) -> float:
    return math.exp(-0.5 * ((t - center) / width) ** 2)


def _intensity(spec: PatternSpec, rng: SplitMix64) -> list[float]:
    """Closed-form intensity curve; spike placement is drawn from the stream."""
    n = spec.length
    base = spec.base_rate
    amp = spec.spike_amplitude
    width = spec.spike_width

    if spec.kind is PatternKind.DOUBLE_SPIKE:
        jitter = max(n // 8, 1)
        first = n // 5 + rng.next_int(jitter)
        second = first + width + n // 4 + rng.next_int(jitter)
        second = min(second, n - 2)
        sigma = max(width / 3.0, 0.75)
        return [
            base + amp * (_bump(first, sigma, t) + _bump(second, sigma, t))
            for t in range(n)
        ]

    if spec.kind is PatternKind.SMOOTH_DECAY_SPIKE:
        center = n // 4 + rng.next_int(max(n // 8, 1))
        tail = 2.0 * width
        rise = max(width / 2.0, 0.75)
        out = []
        for t in range(n):
            if t <= center:
                out.append(base + amp * _bump(center, rise, t))
            else:
                out.append(base + amp * math.exp(-(t - center) / tail))
        return out

    if spec.kind is PatternKind.STATIONARY_SPARSE:
        return [base] * n

    if spec.kind is PatternKind.TREND_WITH_SPIKES:
        centers = sorted(
            n // 6 + rng.next_int(max(n - n // 3, 1)) for _ in range(3)
        )
        sigma = max(width / 3.0, 0.75)
        out = []
        for t in range(n):
            trend = base + amp * t / max(n - 1, 1)
            bumps = sum(_bump(c, sigma, t) for c in centers)
            out.append(trend + 0.5 * amp * bumps)
        return out

    if spec.kind is PatternKind.REGIME_SHIFT:
        shift_at = n // 3 + rng.next_int(max(n // 3, 1))
        upward = rng.next_u64() % 2 == 0
        low, high = base, base + amp
        before, after = (low, high) if upward else (high, low)
        return [before if t < shift_at else after for t in range(n)]

    raise InvalidSpec(f"unknown pattern kind {spec.kind!r}")


def generate(spec: PatternSpec) -> TimeSeries:
    """Generate one monthly series; identical specs give identical output."""
    rng = SplitMix64(spec.seed)
    intensity = _intensity(spec, rng)
    if spec.noise_level == 0.0:
        values = intensity
    else:
        values = []
        for lam in intensity:
            jitter = 1.0 + spec.noise_level * (2.0 * rng.next_float() - 1.0)
            values.append(float(rng.poisson(max(lam * jitter, 0.0))))
    return TimeSeries(
        values=tuple(values),
        granularity=Granularity.MONTHLY,
        start_index=0,
        label=spec.kind.value,
    )


# The eight root cause categories, in canonical order.
ROOT_CAUSES = (
    "capacity",
    "client",
    "data",
    "database",
    "experiment",
    "frontend",
    "ml",
    "migration",
)

# Default pattern per category; frontend runs at a near-zero base so most
# months are empty.
_CATEGORY_DEFAULTS: dict[str, dict] = {
    "capacity": dict(kind=PatternKind.TREND_WITH_SPIKES, base_rate=2.0, spike_amplitude=4.0),
    "client": dict(kind=PatternKind.STATIONARY_SPARSE, base_rate=1.2, spike_amplitude=0.0),
    "data": dict(kind=PatternKind.REGIME_SHIFT, base_rate=3.0, spike_amplitude=4.0),
    "database": dict(kind=PatternKind.STATIONARY_SPARSE, base_rate=1.5, spike_amplitude=0.0),
    "experiment": dict(kind=PatternKind.DOUBLE_SPIKE, base_rate=2.0, spike_amplitude=10.0, spike_width=4),
    "frontend": dict(kind=PatternKind.STATIONARY_SPARSE, base_rate=0.25, spike_amplitude=0.0),
    "ml": dict(kind=PatternKind.TREND_WITH_SPIKES, base_rate=1.5, spike_amplitude=3.0),
    "migration": dict(kind=PatternKind.SMOOTH_DECAY_SPIKE, base_rate=1.0, spike_amplitude=8.0, spike_width=5),
}


@dataclass(frozen=True)
class SuiteSpec:
    """Seed plus optional per-category field overrides for the eight series."""

    seed: int = 0
    length: int = 84
    overrides: Mapping[str, Mapping] = field(default_factory=dict)

    def __post_init__(self) -> None:
        unknown = set(self.overrides) - set(ROOT_CAUSES)
        if unknown:
            raise InvalidSpec(
                f"unknown root cause categories: {sorted(unknown)}; "
                f"expected a subset of {list(ROOT_CAUSES)}"
            )


def generate_suite(spec: SuiteSpec) -> dict[str, TimeSeries]:
    """Generate the eight root-cause series, one per category.

    Each category gets its own sub-seed drawn from the suite seed, so
    changing the suite seed reshuffles every series.
    """
    seeder = SplitMix64(spec.seed)
    suite = {}
    for category in ROOT_CAUSES:
        sub_seed = seeder.next_u64()
        fields = dict(_CATEGORY_DEFAULTS[category])
        fields["length"] = spec.length
        fields["seed"] = sub_seed
        fields.update(spec.overrides.get(category, {}))
        series = generate(PatternSpec(**fields))
        suite[category] = TimeSeries(
            values=series.values,
            granularity=series.granularity,
            start_index=series.start_index,
            label=category,
        )
    return suite
