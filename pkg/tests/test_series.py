import math

import numpy as np
import pytest

from spikecast.errors import (
    AllZeroSeries,
    EmptyInput,
    FinerTarget,
    LengthMismatch,
    NegativeInput,
)
from spikecast.series import (
    Forecast,
    Granularity,
    TimeSeries,
    aggregate,
    compute_metrics,
    floor_zero,
    log1p_forward,
    log1p_inverse,
    normalize,
)


def test_time_series_rejects_bad_values():
    with pytest.raises(ValueError):
        TimeSeries(())
    with pytest.raises(ValueError):
        TimeSeries((1.0, -0.5))
    with pytest.raises(ValueError):
        TimeSeries((1.0, float("nan")))


def test_forecast_shape_enforced():
    with pytest.raises(ValueError):
        Forecast(0, (1.0, 2.0), 3)
    with pytest.raises(ValueError):
        Forecast(0, (), 0)


def test_normalized_series_invariants_enforced():
    from spikecast.series import NormalizedSeries

    with pytest.raises(ValueError):
        NormalizedSeries(ratios=(0.5, 0.4), normalizer=10.0)
    with pytest.raises(ValueError):
        NormalizedSeries(ratios=(1.0,), normalizer=0.0)


class TestNormalize:
    def test_symmetric(self):
        result = normalize(TimeSeries((2, 2)))
        assert result.ratios == (0.5, 0.5)
        assert result.normalizer == 4.0

    def test_all_zero_raises(self):
        with pytest.raises(AllZeroSeries):
            normalize(TimeSeries((0, 0, 0)))

    def test_direct_arithmetic(self):
        result = normalize(TimeSeries((1, 2, 3, 4)))
        assert result.ratios == (0.1, 0.2, 0.3, 0.4)
        assert result.normalizer == 10.0

    def test_roundtrip_reproduces_input(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            values = rng.uniform(0, 100, size=rng.integers(1, 40))
            if values.sum() <= 0:
                continue
            series = TimeSeries(tuple(values))
            back = normalize(series).denormalize()
            assert np.allclose(back, values, rtol=1e-12, atol=0)


class TestComputeMetrics:
    def test_identity(self):
        m = compute_metrics([0.1, 0.2], [0.1, 0.2])
        assert m.mae == 0 and m.mse == 0 and m.rmse == 0
        assert m.sum_error_pct == 0

    def test_hand_computed(self):
        m = compute_metrics([0.2, 0.4], [0.1, 0.5])
        assert m.mae == pytest.approx(0.1, abs=1e-15)
        assert m.mse == pytest.approx(0.01, abs=1e-15)
        assert m.rmse == pytest.approx(0.1, abs=1e-15)

    def test_zero_actual_excluded_from_mape(self):
        m = compute_metrics([0, 2], [1, 1])
        assert m.mape == pytest.approx(0.5, abs=1e-15)
        assert m.sum_error_pct == 0

    def test_mape_undefined_when_no_positive_actual(self):
        m = compute_metrics([0, 0], [1, 1])
        assert m.mape is None
        assert m.sum_error_pct is None

    def test_errors(self):
        with pytest.raises(EmptyInput):
            compute_metrics([], [])
        with pytest.raises(LengthMismatch):
            compute_metrics([1, 2], [1])

    def test_rmse_is_sqrt_mse(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = rng.integers(1, 30)
            m = compute_metrics(rng.uniform(0, 5, n), rng.uniform(0, 5, n))
            assert m.rmse == math.sqrt(m.mse)

    def test_scaling_property(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            n = int(rng.integers(2, 20))
            a = rng.uniform(0.1, 5, n)
            p = rng.uniform(0, 5, n)
            k = float(rng.uniform(0.1, 10))
            base = compute_metrics(a, p)
            scaled = compute_metrics(k * a, k * p)
            assert scaled.mae == pytest.approx(k * base.mae, rel=1e-12)
            assert scaled.mse == pytest.approx(k * k * base.mse, rel=1e-12)
            assert scaled.rmse == pytest.approx(k * base.rmse, rel=1e-12)
            assert scaled.mape == pytest.approx(base.mape, rel=1e-12)
            assert scaled.sum_error_pct == pytest.approx(base.sum_error_pct, rel=1e-9, abs=1e-12)

    def test_brute_force_oracle(self):
        # independent per-element loop, no numpy
        rng = np.random.default_rng(23)
        for _ in range(200):
            n = int(rng.integers(1, 25))
            a = [float(v) for v in rng.uniform(0, 3, n)]
            p = [float(v) for v in rng.uniform(0, 3, n)]
            m = compute_metrics(a, p)
            mae = sum(abs(x - y) for x, y in zip(a, p)) / n
            mse = sum((x - y) ** 2 for x, y in zip(a, p)) / n
            assert abs(m.mae - mae) <= 1e-12
            assert abs(m.mse - mse) <= 1e-12
            assert abs(m.rmse - math.sqrt(mse)) <= 1e-12


class TestLog1pTransform:
    def test_forward_zero(self):
        assert log1p_forward(0.0) == 0.0

    def test_forward_analytic(self):
        assert log1p_forward(math.e - 1) == pytest.approx(1.0, rel=1e-15)

    def test_roundtrip(self):
        assert log1p_inverse(log1p_forward(7.3)) == pytest.approx(7.3, rel=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(NegativeInput):
            log1p_forward(-0.1)

    def test_monotone_and_roundtrip_range(self):
        xs = np.geomspace(1e-6, 1e9, 200)
        ys = [log1p_forward(x) for x in xs]
        assert all(b > a for a, b in zip(ys, ys[1:]))
        for x in np.append(xs, 0.0):
            assert log1p_inverse(log1p_forward(float(x))) == pytest.approx(
                float(x), rel=1e-9, abs=1e-12
            )


class TestFloorZero:
    def test_negative_clamped(self):
        assert floor_zero(Forecast(0, (-0.5,), 1)).values == (0.0,)

    def test_passthrough(self):
        assert floor_zero(Forecast(0, (0.3,), 1)).values == (0.3,)

    def test_elementwise(self):
        assert floor_zero(Forecast(2, (-1, 2, -0.1), 3)).values == (0.0, 2.0, 0.0)

    def test_idempotent_and_preserves_shape(self):
        f = Forecast(5, (-1.5, 0.25, -0.0), 3)
        once = floor_zero(f)
        twice = floor_zero(once)
        assert once == twice
        assert once.origin_index == 5 and once.horizon == 3


class TestAggregate:
    def test_monthly_to_quarterly(self):
        out = aggregate(TimeSeries((1, 2, 3, 4, 5, 6)), Granularity.QUARTERLY)
        assert out.values == (6.0, 15.0)
        assert out.granularity is Granularity.QUARTERLY

    def test_weekly_to_monthly(self):
        out = aggregate(
            TimeSeries((1,) * 8, granularity=Granularity.WEEKLY), Granularity.MONTHLY
        )
        assert out.values == (4.0, 4.0)

    def test_partial_bucket_dropped(self):
        out = aggregate(TimeSeries(tuple(range(1, 8))), Granularity.QUARTERLY)
        assert out.values == (1 + 2 + 3, 4 + 5 + 6)

    def test_finer_target_rejected(self):
        with pytest.raises(FinerTarget):
            aggregate(TimeSeries((1, 2), granularity=Granularity.MONTHLY), Granularity.WEEKLY)
        with pytest.raises(FinerTarget):
            aggregate(TimeSeries((1, 2)), Granularity.MONTHLY)

    def test_chained_factor(self):
        daily = TimeSeries((1,) * 84, granularity=Granularity.DAILY)
        out = aggregate(daily, Granularity.QUARTERLY)
        assert out.values == (84.0,)
