"""Mechanical Mellin reduction: merged and head integrals vs quadrature."""

import math
from fractions import Fraction

import pytest
from scipy.integrate import quad

from skyhaul.specfun import erfc
from skyhaul.specfun.meijerg import MeijerGParams
from skyhaul.specfun.mellin import (
    ERFC_SQRT_KERNEL,
    EXP_KERNEL,
    incomplete_integral,
    merge_product_integral,
    upper_gamma_kernel,
)

ONE = Fraction(1)
HALF = Fraction(1, 2)


class TestMergeFullRange:
    def test_exp_exp(self):
        # int_0^inf e^-(a x) e^-(b x) dx = 1/(a+b)
        term = merge_product_integral(1.0, EXP_KERNEL, 3.0, ONE, EXP_KERNEL, 2.0, ONE)
        assert term.value() == pytest.approx(1.0 / 5.0, rel=1e-10)

    def test_erfc_exp(self):
        # int_0^inf erfc(sqrt(x)) e^-(w x) dx = (1 - 1/sqrt(1+w))/w
        w = 1.7
        term = merge_product_integral(
            1.0, ERFC_SQRT_KERNEL, 1.0, ONE, EXP_KERNEL, w, ONE
        )
        val = term.value() / math.sqrt(math.pi)  # erfc kernel carries sqrt(pi)
        assert val == pytest.approx((1.0 - 1.0 / math.sqrt(1.0 + w)) / w, rel=1e-9)

    def test_power_weighted_mixed_kernels(self):
        # int_0^inf x^(rho-1) erfc(sqrt(D x)) e^-sqrt(psi x) dx vs quadrature
        for rho, psi, dcoef in [(1.0, 1.0, 1.0), (2.3, 4.0, 0.7), (1.5, 0.3, 2.5)]:
            term = merge_product_integral(
                rho, ERFC_SQRT_KERNEL, dcoef, ONE, EXP_KERNEL, math.sqrt(psi), HALF
            )
            got = term.value() / math.sqrt(math.pi)
            oracle, _ = quad(
                lambda x: x ** (rho - 1.0)
                * erfc(math.sqrt(dcoef * x))
                * math.exp(-math.sqrt(psi * x)),
                0.0,
                math.inf,
                limit=300,
            )
            assert got == pytest.approx(oracle, rel=1e-8), (rho, psi, dcoef)

    def test_gamma_kernel_merge(self):
        # int_0^inf x^(g-1) erfc(sqrt(D x)) Gamma(chi2, c x^(at/2)) dx
        for at, g_t, chi2, c, dcoef in [
            (2, 0.5, 3.5, 0.02, 1.0),
            (3, 1.125, 2.2, 0.4, 0.5),
            (1, 0.5, 4.0, 0.15, 2.0),
        ]:
            term = merge_product_integral(
                g_t,
                ERFC_SQRT_KERNEL,
                dcoef,
                ONE,
                upper_gamma_kernel(chi2),
                c,
                Fraction(at, 2),
            )
            got = term.value() / math.sqrt(math.pi)
            from skyhaul.specfun import upper_inc_gamma

            oracle, _ = quad(
                lambda x: x ** (g_t - 1.0)
                * erfc(math.sqrt(dcoef * x))
                * upper_inc_gamma(chi2, c * x ** (at / 2.0)),
                0.0,
                math.inf,
                limit=400,
            )
            assert got == pytest.approx(oracle, rel=1e-7), (at, g_t)


class TestHeadIntegral:
    def test_exp_head(self):
        # int_0^y e^-(w x) dx = (1 - e^-(w y))/w
        w, y = 1.3, 2.0
        term = incomplete_integral(EXP_KERNEL, w, ONE, 1.0, y)
        assert term.value() == pytest.approx((1.0 - math.exp(-w * y)) / w, rel=1e-10)

    def test_erfc_head_with_power(self):
        # int_0^y x^(rho-1) erfc(sqrt(x)) dx vs quadrature
        for rho, y in [(1.0, 0.8), (1.5, 2.0), (2.5, 5.0)]:
            term = incomplete_integral(ERFC_SQRT_KERNEL, 1.0, ONE, rho, y)
            got = term.value() / math.sqrt(math.pi)
            oracle, _ = quad(
                lambda x: x ** (rho - 1.0) * erfc(math.sqrt(x)), 0.0, y, limit=200
            )
            assert got == pytest.approx(oracle, rel=1e-9), (rho, y)

    def test_half_power_head(self):
        # int_0^y x^(-1) G^{3,0}_{1,3}(w sqrt(x)) dx type shape, via exp kernel:
        # int_0^y e^-(w sqrt(x)) dx = 2(1 - (1 + w sqrt(y)) e^-(w sqrt(y)))/w^2
        w, y = 0.9, 3.0
        term = incomplete_integral(EXP_KERNEL, w, HALF, 1.0, y)
        u = w * math.sqrt(y)
        expected = 2.0 * (1.0 - (1.0 + u) * math.exp(-u)) / w**2
        assert term.value() == pytest.approx(expected, rel=1e-9)


class TestReducedShapes:
    def test_merge_reproduces_printed_fso_kernel_shape(self):
        """Mechanical reduction of the s=1 FSO ABER full-range integral must
        land on the G^{3,2}_{3,4} shape with the documented parameter sets."""
        eps2, alpha, zidx = 6.7**2, 2.296, 1.0
        fso = MeijerGParams(3, 0, 1, 3, (eps2 + 1.0,), (eps2, alpha, zidx))
        term = merge_product_integral(
            0.0, ERFC_SQRT_KERNEL, 0.9, ONE, fso, 0.3, ONE
        )
        gp = term.params
        assert (gp.m, gp.n, gp.p, gp.q) == (3, 2, 3, 4)
        assert sorted(gp.a[: gp.n]) == pytest.approx([0.5, 1.0])
        assert gp.a[gp.n :] == pytest.approx([eps2 + 1.0])
        assert sorted(gp.b[: gp.m]) == pytest.approx(sorted([eps2, alpha, zidx]))
        assert gp.b[gp.m :] == pytest.approx([0.0])
        assert term.z == pytest.approx(0.3 / 0.9, rel=1e-12)

    def test_merge_duplication_s2(self):
        """s=2 FSO kernel: the half-power merge must produce the doubled
        parameter blocks and the z^2/16-type argument."""
        eps2, alpha, zidx = 2.6, 2.296, 2.0
        fso = MeijerGParams(3, 0, 1, 3, (eps2 + 1.0,), (eps2, alpha, zidx))
        dcoef, omega = 0.7, 0.4
        term = merge_product_integral(
            0.0, ERFC_SQRT_KERNEL, dcoef, ONE, fso, omega, HALF
        )
        gp = term.params
        # the (eps2+1)/2 entry of the doubled blocks always cancels against
        # the first denominator entry, so the shape is one notch below the
        # textbook (6,2;4,7)
        assert (gp.m, gp.n, gp.p, gp.q) == (5, 2, 3, 6)
        expect_b = sorted(
            [eps2 / 2, alpha / 2, (alpha + 1) / 2, zidx / 2, (zidx + 1) / 2]
        )
        assert sorted(gp.b[: gp.m]) == pytest.approx(expect_b)
        assert term.z == pytest.approx(omega**2 / (16.0 * dcoef), rel=1e-12)
        # numeric check vs quadrature of the defining integral
        got = term.value() / math.sqrt(math.pi)
        from skyhaul.specfun import meijer_g

        oracle, _ = quad(
            lambda x: (1.0 / x)
            * erfc(math.sqrt(dcoef * x))
            * meijer_g(fso, omega * math.sqrt(x)),
            1e-12,
            math.inf,
            limit=400,
        )
        assert got == pytest.approx(oracle, rel=1e-6)

    def test_merge_duplication_s2_degenerate_pointing(self):
        """eps^2 = 1 makes duplicated blocks collide; the reducer cancels the
        matching Gamma pairs, which also removes the pole coalescence."""
        eps2, alpha, zidx = 1.0, 2.296, 2.0
        fso = MeijerGParams(3, 0, 1, 3, (eps2 + 1.0,), (eps2, alpha, zidx))
        dcoef, omega = 0.7, 0.4
        term = merge_product_integral(
            0.0, ERFC_SQRT_KERNEL, dcoef, ONE, fso, omega, HALF
        )
        assert (term.params.m, term.params.n) == (4, 2)  # two pairs cancelled
        got = term.value() / math.sqrt(math.pi)
        from skyhaul.specfun import meijer_g

        oracle, _ = quad(
            lambda x: (1.0 / x)
            * erfc(math.sqrt(dcoef * x))
            * meijer_g(fso, omega * math.sqrt(x)),
            1e-12,
            math.inf,
            limit=400,
        )
        assert got == pytest.approx(oracle, rel=1e-6)
