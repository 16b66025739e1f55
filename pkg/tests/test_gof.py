import math

import numpy as np
import pytest
from pytest_mock import MockerFixture
from scipy import optimize, stats

from wrapxg import gof
from wrapxg.angles import TWO_PI, CircularSample
from wrapxg.errors import DataError, DegenerateStatisticError
from wrapxg.estimate import fit_mle
from wrapxg.gof import ad_stat, cvm_stat, gof_report, ks_test, watson_u2
from wrapxg.linear import Rate
from wrapxg.wrapped import WrappedModelKind, wrapped_sample, wrxg_cdf, wrxg_pdf


def uniform_cdf(theta: np.ndarray) -> np.ndarray:
    return theta / TWO_PI


def quantile_sample(n: int) -> CircularSample:
    # Angles exactly at the uniform quantiles (i - 1/2) / n.
    return CircularSample(angles=TWO_PI * (np.arange(n) + 0.5) / n)


class TestPlugInCases:
    @pytest.mark.parametrize("n", (1, 5, 40))
    def test_statistics_at_exact_quantiles(self, n: int) -> None:
        sample = quantile_sample(n)
        d, _ = ks_test(sample, uniform_cdf)
        assert d == pytest.approx(0.5 / n)
        assert cvm_stat(sample, uniform_cdf) == pytest.approx(1.0 / (12.0 * n))
        assert watson_u2(sample, uniform_cdf) == pytest.approx(1.0 / (12.0 * n))

    def test_single_point(self) -> None:
        sample = CircularSample.fromValues([math.pi])
        d, p = ks_test(sample, uniform_cdf)
        assert d == 0.5
        assert p == pytest.approx(stats.kstwobign.sf(0.5))
        assert ad_stat(sample, uniform_cdf) == pytest.approx(
            -1.0 - 2.0 * math.log(0.5)
        )


class TestAgainstScipy:
    def sample(self) -> tuple[CircularSample, Rate]:
        rate = Rate(1.3)
        return wrapped_sample(WrappedModelKind.WRXG, rate, 150, 31), rate

    def test_ks_matches_asymptotic_kstest(self) -> None:
        sample, rate = self.sample()
        d, p = ks_test(sample, lambda t: wrxg_cdf(t, rate))
        reference = stats.kstest(
            sample.angles, lambda t: wrxg_cdf(t, rate), method="asymp"
        )
        assert d == pytest.approx(reference.statistic, rel=1e-12)
        assert p == pytest.approx(reference.pvalue, rel=1e-9)

    def test_cvm_matches_cramervonmises(self) -> None:
        sample, rate = self.sample()
        reference = stats.cramervonmises(sample.angles, lambda t: wrxg_cdf(t, rate))
        assert cvm_stat(sample, lambda t: wrxg_cdf(t, rate)) == pytest.approx(
            reference.statistic, rel=1e-10
        )

    def test_ad_matches_direct_formula(self) -> None:
        sample, rate = self.sample()
        u = np.sort(wrxg_cdf(sample.angles, rate))
        n = u.size
        i = np.arange(1, n + 1)
        expected = -n - np.mean((2 * i - 1) * (np.log(u) + np.log(1.0 - u[::-1])))
        assert ad_stat(sample, lambda t: wrxg_cdf(t, rate)) == pytest.approx(
            expected, rel=1e-10
        )


class TestInvariances:
    def test_order_does_not_matter(self) -> None:
        rate = Rate(2.5)
        sample = wrapped_sample(WrappedModelKind.WRXG, rate, 80, 2)
        shuffled = CircularSample(
            angles=np.random.default_rng(0).permutation(sample.angles)
        )

        def cdf(t: np.ndarray) -> np.ndarray:
            return wrxg_cdf(t, rate)

        for statistic in (cvm_stat, ad_stat, watson_u2):
            assert statistic(sample, cdf) == pytest.approx(
                statistic(shuffled, cdf), rel=1e-12
            )
        assert ks_test(sample, cdf) == ks_test(shuffled, cdf)

    @pytest.mark.parametrize(
        "shift", np.random.default_rng(31).uniform(0.0, TWO_PI, 10).tolist()
    )
    def test_watson_is_rotation_invariant(self, shift: float) -> None:
        rate = Rate(1.0)
        sample = wrapped_sample(WrappedModelKind.WRXG, rate, 100, 6)
        rotated = CircularSample.fromValues(sample.angles + shift)
        offset = wrxg_cdf(TWO_PI - shift, rate)

        def cdf(t: np.ndarray) -> np.ndarray:
            return wrxg_cdf(t, rate)

        def rotated_cdf(t: np.ndarray) -> np.ndarray:
            return np.mod(wrxg_cdf(np.mod(t - shift, TWO_PI), rate) - offset, 1.0)

        assert watson_u2(rotated, rotated_cdf) == pytest.approx(
            watson_u2(sample, cdf), abs=1e-10
        )


class TestDegenerateCases:
    def test_ad_undefined_at_cdf_zero(self) -> None:
        sample = CircularSample.fromValues([0.0, 1.0, 2.0])
        with pytest.raises(DegenerateStatisticError):
            ad_stat(sample, uniform_cdf)

    def test_report_flags_degenerate_ad(self, mocker: MockerFixture) -> None:
        warning = mocker.patch.object(gof.logger, "warning")
        sample = CircularSample.fromValues([0.0, 0.4, 0.9, 1.7, 3.0])
        fit = fit_mle(WrappedModelKind.WRXG, sample)

        report = gof_report(WrappedModelKind.WRXG, sample, fit)
        assert report.a2_degenerate
        assert math.isnan(report.a2)
        assert math.isfinite(report.w2)
        assert math.isfinite(report.u2)
        warning.assert_called_once()

    def test_cdf_must_return_one_value_per_angle(self) -> None:
        sample = CircularSample.fromValues([1.0, 2.0])
        with pytest.raises(DataError):
            cvm_stat(sample, lambda t: np.array([0.5]))

    def test_cdf_must_be_finite(self) -> None:
        sample = CircularSample.fromValues([1.0, 2.0])
        with pytest.raises(DataError):
            ks_test(sample, lambda t: np.full(t.shape, math.nan))


class TestGofReport:
    @pytest.mark.parametrize("kind", list(WrappedModelKind))
    def test_fields(self, kind: WrappedModelKind) -> None:
        sample = wrapped_sample(kind, Rate(1.3), 60, 14)
        fit = fit_mle(kind, sample)
        report = gof_report(kind, sample, fit)

        assert report.model is kind
        assert report.n == 60
        assert 0.0 < report.d <= 1.0
        assert 0.0 <= report.ks_p <= 1.0
        assert report.w2 > 0.0
        assert report.a2 > 0.0
        assert not report.a2_degenerate
        assert report.u2 <= report.w2

    def test_true_model_is_rarely_rejected(self) -> None:
        rate = Rate(1.3)
        accepted = 0
        for seed in range(100):
            sample = wrapped_sample(WrappedModelKind.WRXG, rate, 60, seed)
            fit = fit_mle(WrappedModelKind.WRXG, sample)
            accepted += gof_report(WrappedModelKind.WRXG, sample, fit).ks_p > 0.05
        assert accepted >= 90


class TestSensitivity:
    @staticmethod
    def quantile(p: float, rate: Rate) -> float:
        return optimize.brentq(lambda t: wrxg_cdf(t, rate) - p, 0.0, TWO_PI)

    def test_moving_a_point_to_lower_density_increases_statistics(self) -> None:
        rate = Rate(2.5)
        n = 20
        angles = [self.quantile((i + 0.5) / n, rate) for i in range(n)]
        before = CircularSample.fromValues(angles)

        tail = self.quantile(0.999, rate)
        assert wrxg_pdf(tail, rate) < wrxg_pdf(angles[n // 2], rate)
        angles[n // 2] = tail
        after = CircularSample.fromValues(angles)

        def cdf(t: np.ndarray) -> np.ndarray:
            return wrxg_cdf(t, rate)

        assert cvm_stat(after, cdf) > cvm_stat(before, cdf)
        assert ad_stat(after, cdf) > ad_stat(before, cdf)

    @pytest.mark.slow
    def test_scaled_ks_follows_kolmogorov_limit(self) -> None:
        rate = Rate(1.3)

        def cdf(t: np.ndarray) -> np.ndarray:
            return wrxg_cdf(t, rate)

        p_values = [
            ks_test(wrapped_sample(WrappedModelKind.WRXG, rate, 10_000, seed), cdf)[1]
            for seed in range(2000)
        ]
        assert stats.kstest(p_values, "uniform").statistic < 0.05
