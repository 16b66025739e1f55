import math

import numpy as np
import pytest
from scipy import integrate, stats

from wrapxg.errors import DomainError
from wrapxg.linear import (
    LinearModelKind,
    Rate,
    linear_cdf,
    linear_cf,
    linear_pdf,
    linear_sample,
    mixture_weights,
    xg_cdf,
    xg_cf,
    xg_pdf,
    xg_sample,
)

RATES = (0.1, 0.7, 1.0, 2.5, 4.0, 8.0)


class TestRate:
    def test_valid(self) -> None:
        assert Rate(3).value == 3.0
        assert isinstance(Rate(3).value, float)
        assert float(Rate(0.5)) == 0.5

    @pytest.mark.parametrize("value", [0.0, -1.0, math.inf, math.nan])
    def test_invalid(self, value: float) -> None:
        with pytest.raises(DomainError):
            Rate(value)

    def test_coerce(self) -> None:
        rate = Rate(2.0)
        assert Rate.coerce(rate) is rate
        assert Rate.coerce(2.0) == rate


class TestXgamma:
    def test_mixture_weights_sum_to_one(self) -> None:
        for lam in RATES:
            assert math.isclose(sum(mixture_weights(Rate(lam))), 1.0)

    @pytest.mark.parametrize("lam", RATES)
    def test_pdf_integrates_to_one(self, lam: float) -> None:
        total, _ = integrate.quad(xg_pdf, 0.0, math.inf, args=(Rate(lam),))
        assert total == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("lam", RATES)
    def test_cdf_matches_integrated_pdf(self, lam: float) -> None:
        rate = Rate(lam)
        for x in (0.1, 1.0, 3.0, 10.0):
            area, _ = integrate.quad(xg_pdf, 0.0, x, args=(rate,))
            assert xg_cdf(x, rate) == pytest.approx(area, abs=1e-10)

    def test_cdf_limits(self) -> None:
        rate = Rate(1.0)
        assert xg_cdf(0.0, rate) == 0.0
        assert xg_cdf(math.inf, rate) == 1.0
        assert xg_cdf(1e3, rate) == pytest.approx(1.0)

    def test_array_input(self) -> None:
        rate = Rate(2.0)
        x = np.array([0.0, 0.5, 1.0])
        pdf = xg_pdf(x, rate)
        assert isinstance(pdf, np.ndarray)
        assert pdf.shape == (3,)
        assert pdf[1] == xg_pdf(0.5, rate)

    @pytest.mark.parametrize("x", [-0.1, math.nan, math.inf])
    def test_pdf_rejects_out_of_support(self, x: float) -> None:
        with pytest.raises(DomainError):
            xg_pdf(x, Rate(1.0))

    def test_cdf_rejects_negative(self) -> None:
        with pytest.raises(DomainError):
            xg_cdf(-1.0, Rate(1.0))

    @pytest.mark.parametrize("lam", RATES)
    def test_cf_matches_quadrature(self, lam: float) -> None:
        rate = Rate(lam)
        for t in (1.0, 2.0, 3.0):
            real, _ = integrate.quad(
                xg_pdf, 0.0, math.inf, args=(rate,), weight="cos", wvar=t
            )
            imag, _ = integrate.quad(
                xg_pdf, 0.0, math.inf, args=(rate,), weight="sin", wvar=t
            )
            phi = xg_cf(t, rate)
            assert phi.real == pytest.approx(real, abs=1e-7)
            assert phi.imag == pytest.approx(imag, abs=1e-7)

    @pytest.mark.parametrize("lam", RATES)
    def test_cf_conjugate_symmetry(self, lam: float) -> None:
        rate = Rate(lam)
        for t in (0.25, 1.0, 2.0, 7.5):
            assert xg_cf(-t, rate) == pytest.approx(xg_cf(t, rate).conjugate())

    def test_cf_at_zero(self) -> None:
        assert xg_cf(0.0, Rate(0.7)) == 1.0

    def test_cf_rejects_non_finite(self) -> None:
        with pytest.raises(DomainError):
            xg_cf(math.inf, Rate(1.0))

    def test_sample_is_deterministic(self) -> None:
        a = xg_sample(Rate(1.0), 100, 42)
        b = xg_sample(Rate(1.0), 100, 42)
        c = xg_sample(Rate(1.0), 100, 43)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_sample_rejects_empty(self) -> None:
        with pytest.raises(DomainError):
            xg_sample(Rate(1.0), 0, 1)

    def test_sample_follows_distribution(self) -> None:
        rate = Rate(2.5)
        sample = xg_sample(rate, 5000, 7)
        assert np.all(sample >= 0.0)
        result = stats.kstest(sample, lambda x: xg_cdf(x, rate))
        assert result.pvalue > 0.001

    @pytest.mark.slow
    def test_sample_conforms_across_seeds(self) -> None:
        rate = Rate(1.0)
        passed = 0
        for seed in range(100):
            sample = xg_sample(rate, 100_000, seed)
            passed += stats.kstest(sample, lambda x: xg_cdf(x, rate)).pvalue >= 0.01
        assert passed >= 95


class TestLinearModels:
    @pytest.mark.parametrize("kind", list(LinearModelKind))
    def test_pdf_integrates_to_one(self, kind: LinearModelKind) -> None:
        total, _ = integrate.quad(
            lambda x: linear_pdf(kind, x, Rate(1.3)), 0.0, math.inf
        )
        assert total == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("kind", list(LinearModelKind))
    def test_cdf_matches_integrated_pdf(self, kind: LinearModelKind) -> None:
        rate = Rate(0.7)
        area, _ = integrate.quad(lambda x: linear_pdf(kind, x, rate), 0.0, 2.0)
        assert linear_cdf(kind, 2.0, rate) == pytest.approx(area, abs=1e-10)

    @pytest.mark.parametrize("kind", list(LinearModelKind))
    def test_cf_matches_quadrature(self, kind: LinearModelKind) -> None:
        rate = Rate(1.3)
        real, _ = integrate.quad(
            lambda x: linear_pdf(kind, x, rate), 0.0, math.inf, weight="cos", wvar=1.0
        )
        imag, _ = integrate.quad(
            lambda x: linear_pdf(kind, x, rate), 0.0, math.inf, weight="sin", wvar=1.0
        )
        phi = linear_cf(kind, 1.0, rate)
        assert phi.real == pytest.approx(real, abs=1e-7)
        assert phi.imag == pytest.approx(imag, abs=1e-7)

    def test_dispatch_to_xgamma(self) -> None:
        rate = Rate(4.0)
        assert linear_pdf(LinearModelKind.XGAMMA, 0.3, rate) == xg_pdf(0.3, rate)
        assert linear_cf(LinearModelKind.XGAMMA, 2.0, rate) == xg_cf(2.0, rate)

    @pytest.mark.parametrize("kind", list(LinearModelKind))
    def test_sample_follows_distribution(self, kind: LinearModelKind) -> None:
        rate = Rate(1.0)
        sample = linear_sample(kind, rate, 5000, 11)
        result = stats.kstest(sample, lambda x: linear_cdf(kind, x, rate))
        assert result.pvalue > 0.001
