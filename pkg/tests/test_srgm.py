import math

import numpy as np
import pytest

from spikecast.errors import (
    ExhaustedFaults,
    IndexExceedsFaults,
    InvalidParams,
    NonMonotoneData,
    TooFewPoints,
    UnsupportedKind,
)
from spikecast.srgm import (
    HAZARD_KINDS,
    MEAN_VALUE_KINDS,
    PARAM_NAMES,
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


def _random_params(kind: SrgmKind, rng: np.random.Generator) -> SrgmParams:
    scale = float(rng.uniform(10, 200))
    rate = float(rng.uniform(1e-3, 1.5))
    if kind is SrgmKind.NHPP_BASIC:
        return SrgmParams(kind, (scale, scale * rate))
    if kind is SrgmKind.INFLECTION_S:
        return SrgmParams(kind, (scale, rate, float(rng.uniform(0, 10))))
    if kind is SrgmKind.MUSA_OKUMOTO_LOG:
        return SrgmParams(kind, (float(rng.uniform(0.1, 20)), float(rng.uniform(1e-3, 1))))
    return SrgmParams(kind, (scale, rate))


class TestMeanValue:
    def test_goel_okumoto_half_life(self):
        params = SrgmParams(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, (100.0, math.log(2)))
        assert srgm_mean(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, params, 1.0) == pytest.approx(
            50.0, rel=1e-12
        )

    def test_delayed_s_boundary(self):
        params = SrgmParams(SrgmKind.DELAYED_S, (37.0, 0.8))
        assert srgm_mean(SrgmKind.DELAYED_S, params, 0.0) == 0.0

    def test_inflection_zero_factor_reduces_to_exponential_form(self):
        params = SrgmParams(SrgmKind.INFLECTION_S, (40.0, 1.0, 0.0))
        expected = 40.0 * (1.0 - math.exp(-3.0))
        assert srgm_mean(SrgmKind.INFLECTION_S, params, 3.0) == pytest.approx(
            expected, rel=1e-12
        )

    def test_musa_okumoto_inverse(self):
        params = SrgmParams(SrgmKind.MUSA_OKUMOTO_LOG, (2.0, 1.0))
        tau = (math.e - 1.0) / 2.0
        assert srgm_mean(SrgmKind.MUSA_OKUMOTO_LOG, params, tau) == pytest.approx(
            1.0, rel=1e-12
        )

    def test_hazard_kinds_rejected(self):
        params = SrgmParams(SrgmKind.JELINSKI_MORANDA, (10.0, 0.1))
        with pytest.raises(UnsupportedKind):
            srgm_mean(SrgmKind.JELINSKI_MORANDA, params, 1.0)

    def test_mu_zero_for_all_kinds(self):
        rng = np.random.default_rng(1)
        for kind in MEAN_VALUE_KINDS:
            for _ in range(20):
                params = _random_params(kind, rng)
                assert srgm_mean(kind, params, 0.0) == 0.0

    def test_monotone_in_time(self):
        rng = np.random.default_rng(2)
        for _ in range(1000):
            kind = MEAN_VALUE_KINDS[rng.integers(len(MEAN_VALUE_KINDS))]
            params = _random_params(kind, rng)
            t1 = float(rng.uniform(0, 50))
            t2 = t1 + float(rng.uniform(0, 50))
            assert srgm_mean(kind, params, t1) <= srgm_mean(kind, params, t2) + 1e-12

    def test_asymptotes(self):
        rng = np.random.default_rng(3)
        bounded = [k for k in MEAN_VALUE_KINDS if k is not SrgmKind.MUSA_OKUMOTO_LOG]
        for kind in bounded:
            for _ in range(25):
                params = _random_params(kind, rng)
                limit = params.values[0]
                assert srgm_mean(kind, params, 1e9) == pytest.approx(limit, rel=1e-3)
        params = SrgmParams(SrgmKind.MUSA_OKUMOTO_LOG, (2.0, 0.5))
        assert srgm_mean(SrgmKind.MUSA_OKUMOTO_LOG, params, 1e9) > srgm_mean(
            SrgmKind.MUSA_OKUMOTO_LOG, params, 1e6
        )


class TestIntensity:
    def test_nhpp_at_zero(self):
        params = SrgmParams(SrgmKind.NHPP_BASIC, (55.0, 3.0))
        assert srgm_intensity(SrgmKind.NHPP_BASIC, params, 0.0) == pytest.approx(3.0)

    def test_musa_okumoto_at_zero(self):
        params = SrgmParams(SrgmKind.MUSA_OKUMOTO_LOG, (2.0, 1.0))
        assert srgm_intensity(SrgmKind.MUSA_OKUMOTO_LOG, params, 0.0) == pytest.approx(2.0)

    def test_goel_okumoto_derivative(self):
        params = SrgmParams(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, (100.0, 0.1))
        assert srgm_intensity(
            SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, params, 10.0
        ) == pytest.approx(10.0 * math.exp(-1.0), rel=1e-12)

    def test_matches_finite_differences(self):
        # sample t inside the active region of each curve (t <= 3 / rate);
        # further out the central difference is pure float cancellation
        rng = np.random.default_rng(4)
        for _ in range(100):
            kind = MEAN_VALUE_KINDS[rng.integers(len(MEAN_VALUE_KINDS))]
            params = _random_params(kind, rng)
            if kind is SrgmKind.MUSA_OKUMOTO_LOG:
                t = float(rng.uniform(0.5, 20))
            elif kind is SrgmKind.NHPP_BASIC:
                scale, intensity = params.values
                t = float(rng.uniform(0.05, 3.0)) * scale / intensity
            else:
                t = float(rng.uniform(0.05, 3.0)) / params.values[1]
            step = 1e-6 * max(t, 1.0)
            numeric = (
                srgm_mean(kind, params, t + step) - srgm_mean(kind, params, t - step)
            ) / (2 * step)
            exact = srgm_intensity(kind, params, t)
            assert numeric == pytest.approx(exact, rel=1e-6, abs=1e-9)


class TestHazards:
    def test_jm_full_population(self):
        params = SrgmParams(SrgmKind.JELINSKI_MORANDA, (10.0, 0.1))
        assert jm_hazard(params, 1) == pytest.approx(1.0)

    def test_jm_last_fault(self):
        params = SrgmParams(SrgmKind.JELINSKI_MORANDA, (10.0, 0.1))
        assert jm_hazard(params, 10) == pytest.approx(0.1)

    def test_jm_index_guard(self):
        params = SrgmParams(SrgmKind.JELINSKI_MORANDA, (10.0, 0.1))
        with pytest.raises(IndexExceedsFaults):
            jm_hazard(params, 11)

    def test_imperfect_p_zero_constant(self):
        params = SrgmParams(SrgmKind.GOEL_OKUMOTO_IMPERFECT, (10.0, 0.2, 0.0))
        for i in range(1, 8):
            assert go_imperfect_hazard(params, i) == pytest.approx(2.0)

    def test_imperfect_p_one_matches_jm(self):
        imperfect = SrgmParams(SrgmKind.GOEL_OKUMOTO_IMPERFECT, (10.0, 0.2, 1.0))
        jm = SrgmParams(SrgmKind.JELINSKI_MORANDA, (10.0, 0.2))
        for i in range(1, 11):
            assert go_imperfect_hazard(imperfect, i) == pytest.approx(jm_hazard(jm, i))

    def test_imperfect_hand_case(self):
        params = SrgmParams(SrgmKind.GOEL_OKUMOTO_IMPERFECT, (10.0, 0.2, 0.5))
        assert go_imperfect_hazard(params, 5) == pytest.approx(1.6)

    def test_imperfect_exhausted(self):
        params = SrgmParams(SrgmKind.GOEL_OKUMOTO_IMPERFECT, (2.0, 0.2, 1.0))
        with pytest.raises(ExhaustedFaults):
            go_imperfect_hazard(params, 3)


class TestRemaining:
    def test_nothing_detected_yet(self):
        params = SrgmParams(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, (42.0, 0.7))
        assert srgm_remaining(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, params, 0.0) == 42.0

    def test_half_life(self):
        params = SrgmParams(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, (100.0, math.log(2)))
        assert srgm_remaining(
            SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, params, 1.0
        ) == pytest.approx(50.0, rel=1e-12)

    def test_consistency_with_mean(self):
        rng = np.random.default_rng(5)
        kind = SrgmKind.GOEL_OKUMOTO_MEAN_VALUE
        for _ in range(100):
            params = _random_params(kind, rng)
            t = float(rng.uniform(0, 30))
            total = params.values[0]
            assert srgm_mean(kind, params, t) + srgm_remaining(kind, params, t) == (
                pytest.approx(total, rel=1e-12)
            )

    def test_other_kind_rejected(self):
        params = SrgmParams(SrgmKind.DELAYED_S, (10.0, 0.3))
        with pytest.raises(InvalidParams):
            srgm_remaining(SrgmKind.DELAYED_S, params, 1.0)


def _synth(kind: SrgmKind, values: tuple, times) -> list[tuple[float, float]]:
    params = SrgmParams(kind, values)
    return [(float(t), srgm_mean(kind, params, float(t))) for t in times]


class TestFit:
    def test_goel_okumoto_recovery(self):
        data = _synth(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, (120.0, 0.3), range(1, 21))
        result = srgm_fit(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, data)
        assert result.converged
        assert result.sse <= 1e-8
        assert result.params.values[0] == pytest.approx(120.0, rel=0.01)
        assert result.params.values[1] == pytest.approx(0.3, rel=0.01)

    def test_delayed_s_recovery(self):
        data = _synth(SrgmKind.DELAYED_S, (80.0, 0.5), range(1, 31))
        result = srgm_fit(SrgmKind.DELAYED_S, data)
        assert result.params.values[0] == pytest.approx(80.0, rel=0.01)
        assert result.params.values[1] == pytest.approx(0.5, rel=0.01)

    @pytest.mark.parametrize("kind,true,times", [
        (SrgmKind.EXPONENTIAL, (100.0, 0.15), range(1, 26)),
        (SrgmKind.NHPP_BASIC, (90.0, 12.0), range(1, 26)),
        (SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, (120.0, 0.3), range(1, 21)),
        (SrgmKind.DELAYED_S, (80.0, 0.5), range(1, 31)),
        (SrgmKind.INFLECTION_S, (60.0, 0.4, 3.0), range(1, 31)),
        (SrgmKind.MUSA_OKUMOTO_LOG, (4.0, 0.08), range(1, 26)),
    ])
    def test_recovery_all_kinds(self, kind, true, times):
        result = srgm_fit(kind, _synth(kind, true, times))
        for fitted, want in zip(result.params.values, true):
            assert fitted == pytest.approx(want, rel=0.01)

    def test_all_zero_boundary(self):
        data = [(float(t), 0.0) for t in range(1, 10)]
        result = srgm_fit(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, data)
        assert result.converged
        assert result.sse == 0.0
        assert result.params.values[0] == 0.0

    def test_non_monotone_rejected(self):
        with pytest.raises(NonMonotoneData):
            srgm_fit(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, [(1, 5), (2, 4), (3, 6)])

    def test_too_few_points(self):
        with pytest.raises(TooFewPoints):
            srgm_fit(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, [(1, 1), (2, 2)])

    def test_hazard_kind_rejected(self):
        with pytest.raises(UnsupportedKind):
            srgm_fit(SrgmKind.JELINSKI_MORANDA, [(1, 1), (2, 2), (3, 3)])

    def test_iterations_capped(self):
        data = _synth(SrgmKind.INFLECTION_S, (60.0, 0.4, 3.0), range(1, 31))
        result = srgm_fit(SrgmKind.INFLECTION_S, data)
        assert result.iterations <= 500
        assert result.converged


class TestCompare:
    def test_inflection_data_prefers_inflection(self):
        data = _synth(SrgmKind.INFLECTION_S, (60.0, 0.35, 4.0), range(1, 31))
        results = srgm_compare(
            data, [SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, SrgmKind.INFLECTION_S]
        )
        assert results[0].kind is SrgmKind.INFLECTION_S
        assert results[0].sse < results[1].sse

    def test_linear_data_deterministic_ranking(self):
        data = [(float(t), 2.0 * t) for t in range(1, 25)]
        first = srgm_compare(data)
        second = srgm_compare(data)
        assert [r.kind for r in first] == [r.kind for r in second]
        assert [r.sse for r in first] == [r.sse for r in second]

    def test_single_kind(self):
        data = _synth(SrgmKind.GOEL_OKUMOTO_MEAN_VALUE, (50.0, 0.2), range(1, 15))
        results = srgm_compare(data, [SrgmKind.GOEL_OKUMOTO_MEAN_VALUE])
        assert len(results) == 1
        assert results[0].kind is SrgmKind.GOEL_OKUMOTO_MEAN_VALUE

    def test_ascending_sse(self):
        data = _synth(SrgmKind.DELAYED_S, (70.0, 0.4), range(1, 28))
        results = srgm_compare(data)
        sses = [r.sse for r in results]
        assert sses == sorted(sses)

    def test_hazard_kind_propagates(self):
        data = _synth(SrgmKind.DELAYED_S, (70.0, 0.4), range(1, 28))
        with pytest.raises(UnsupportedKind):
            srgm_compare(data, [SrgmKind.DELAYED_S, SrgmKind.JELINSKI_MORANDA])


class TestParamsValidation:
    def test_probability_domain(self):
        with pytest.raises(InvalidParams):
            SrgmParams(SrgmKind.GOEL_OKUMOTO_IMPERFECT, (10.0, 0.1, 1.5))

    def test_wrong_arity(self):
        with pytest.raises(InvalidParams):
            SrgmParams(SrgmKind.EXPONENTIAL, (10.0,))

    def test_kind_mismatch_rejected(self):
        params = SrgmParams(SrgmKind.EXPONENTIAL, (10.0, 0.1))
        with pytest.raises(InvalidParams):
            srgm_mean(SrgmKind.DELAYED_S, params, 1.0)

    def test_param_names_cover_all_kinds(self):
        assert set(PARAM_NAMES) == set(SrgmKind)
        assert set(MEAN_VALUE_KINDS) | set(HAZARD_KINDS) == set(SrgmKind)
