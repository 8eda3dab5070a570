import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import binom, gamma, hyp1f1

from poissonquad import (ExtremalFunction, RieszSpec, c_alpha_2j, get_pair, numeric_fourier, psi_freq,
                         riesz_difference, riesz_fourier, riesz_function)
from poissonquad.bounds import riesz_materialized
from poissonquad.errors import DomainError, NoConvergence, NotL1, RieszUnavailable
from poissonquad.extremal import coefficient

SQRT_2PI = math.sqrt(2 * math.pi)


def c_closed(alpha, j):
    # expand sin^{2j} into cosines and use int_0^inf cos(bu) u^{-1-alpha} du = Gamma(-alpha) cos(pi alpha/2) b^alpha
    k = np.arange(2 * j + 1)
    s = np.sum((-1.0) ** k * binom(2 * j, k) * np.abs(2.0 * (j - k)) ** alpha)
    integral = (-1) ** j * 2.0 ** (-2 * j) * gamma(-alpha) * math.cos(math.pi * alpha / 2) * s
    return (-1) ** j * 2.0 ** (2 * j - alpha) * integral


def gaussian_riesz(alpha, t):
    """D^alpha e^{-x^2} through a confluent hypergeometric function."""
    return 2 ** alpha * gamma((alpha + 1) / 2) / math.sqrt(math.pi) * hyp1f1((alpha + 1) / 2, 0.5, -t * t)


class TestConstant:
    def test_classical_values(self):
        assert c_alpha_2j(1.0, 1) == pytest.approx(-math.pi, abs=1e-10)
        assert c_alpha_2j(2.0, 2) == pytest.approx(4 * math.log(2), abs=1e-10)

    def test_sign_parity(self):
        assert c_alpha_2j(1.5, 1) < 0 < c_alpha_2j(1.5, 2)
        assert c_alpha_2j(3.5, 3) < 0

    @settings(max_examples=40, deadline=None)
    @given(j=st.integers(1, 4), frac=st.floats(0.02, 0.98))
    def test_closed_form(self, j, frac):
        alpha = 2 * j * frac
        if abs(alpha - round(alpha)) < 0.05:
            return  # the closed form is 0 * inf at integers
        assert c_alpha_2j(alpha, j) == pytest.approx(c_closed(alpha, j), abs=1e-10, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            c_alpha_2j(2.0, 1)
        with pytest.raises(DomainError):
            c_alpha_2j(0.0, 1)


class TestFourierRoute:
    def test_second_order_at_zero(self, gaussian):
        assert riesz_fourier(gaussian, 2.0, 0.0) == pytest.approx(2.0, abs=1e-10)

    @pytest.mark.parametrize("t", [0.0, 0.3, 1.0, 2.5, 6.0])
    def test_second_order_is_minus_second_derivative(self, gaussian, t):
        g2 = gaussian.time.derivatives[2]
        assert riesz_fourier(gaussian, 2.0, t) == pytest.approx(-g2(np.array([t]))[0], abs=1e-6)

    @pytest.mark.parametrize("alpha", [1.25, 1.5, 2.0, 3.3])
    @pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 3.0])
    def test_gaussian_closed_form(self, gaussian, alpha, t):
        assert riesz_fourier(gaussian, alpha, t) == pytest.approx(gaussian_riesz(alpha, t), abs=1e-10)

    @pytest.mark.parametrize("t", [0.0, 1e-6, 0.7, 40.0])
    def test_f2_second_order(self, f2, t):
        d2 = f2.time.derivatives[2]
        assert riesz_fourier(f2, 2.0, t) == pytest.approx(-d2(np.array([t]))[0], abs=1e-9)

    def test_zero(self, zero):
        assert riesz_fourier(zero, 1.5, 0.3) == 0

    def test_extremal_pair(self):
        alpha, J = 1.5, 24
        pair = ExtremalFunction(alpha).pair(J)
        x, w = np.polynomial.legendre.leggauss(30)
        ref = 0.0
        for j in range(1, J + 1):
            a = coefficient(j, alpha)
            for lo, hi in ((j - a, j), (j, j + a)):
                v = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
                ref += 2 * j ** -alpha * 0.5 * (hi - lo) * np.dot(w, v ** alpha * psi_freq(j, alpha, v)) / SQRT_2PI
        assert riesz_fourier(pair, alpha, 0.0) == pytest.approx(ref, rel=1e-10)

    def test_not_integrable(self, f1):
        with pytest.raises(NotL1):
            riesz_fourier(f1, 1.25, 0.5)

    def test_conditional(self, f1):
        # D^alpha f1(t) ~ A t^{-1-alpha} with A from the kink of |v|^alpha at 0
        alpha, t = 1.25, 200.0
        A = math.sqrt(2 / math.pi) * gamma(alpha + 1) * math.cos(math.pi * (alpha + 1) / 2) * math.sqrt(2 / math.pi)
        got = riesz_fourier(f1, alpha, t, conditional=True)
        assert got == pytest.approx(A * t ** (-1 - alpha), rel=1e-3)


class TestDifferenceRoute:
    def test_second_order(self, gaussian):
        assert riesz_difference(gaussian.time, RieszSpec(2.0, j=2), 0.0) == pytest.approx(2.0, abs=1e-3)

    def test_zero(self, zero):
        assert riesz_difference(zero.time, RieszSpec(1.5), 0.2) == 0

    @pytest.mark.parametrize("alpha", [1.25, 1.5, 2.0])
    @pytest.mark.parametrize("t", [0.0, 0.5, 1.0])
    def test_cross_validation(self, gaussian, alpha, t):
        d = riesz_difference(gaussian.time, RieszSpec(alpha, j=2), t)
        assert d == pytest.approx(riesz_fourier(gaussian, alpha, t), abs=1e-3)

    def test_independent_of_j(self, gaussian):
        a = riesz_difference(gaussian.time, RieszSpec(1.5, j=2), 0.4)
        b = riesz_difference(gaussian.time, RieszSpec(1.5, j=3), 0.4)
        assert a == pytest.approx(b, abs=2e-3)

    def test_kink_does_not_converge(self, f1):
        with pytest.raises(NoConvergence):
            riesz_difference(f1.time, RieszSpec(1.5), 0.0)

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            RieszSpec(4.0, j=2)
        with pytest.raises(DomainError):
            RieszSpec(1.0, epsilon=0.0)


class TestMaterialized:
    def test_spectral_identity(self, gaussian):
        D = riesz_function(gaussian, 1.5)
        for v in (0.0, 0.5, 1.0, 2.0, 4.0):
            expected = abs(v) ** 1.5 * gaussian.freq(np.array([v]))[0].real
            assert numeric_fourier(D, v, 1e-8).real == pytest.approx(expected, abs=1e-8)

    def test_second_order_on_grid(self, f2):
        D = riesz_materialized(f2, 2.0)
        x = np.concatenate([np.linspace(-30, 30, 301), [1e-9, 500.0]])
        assert np.max(np.abs(D(x) + f2.time.derivatives[2](x))) <= 1e-9

    def test_pointwise_against_fourier(self, f1):
        D = riesz_materialized(f1, 1.25)
        for t in (1e-4, 0.3, 1.0, 5.0, 100.0):
            assert D(np.array([t]))[0] == pytest.approx(riesz_fourier(f1, 1.25, t, conditional=True), rel=1e-6)

    def test_unavailable(self, f1):
        with pytest.raises(RieszUnavailable):
            riesz_function(f1, 2.0)
