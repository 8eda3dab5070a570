import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import zeta as mp_zeta
from scipy.integrate import quad, trapezoid

from poissonquad import (DistanceQuery, ExtremalFunction, dist_bernstein, phi_freq, phi_time, psi_freq, psi_time,
                         remainder_spectral, scale, sharpness_check, verify_properties)
from poissonquad.errors import DomainError
from poissonquad.extremal import coefficient

SQRT_2PI = math.sqrt(2 * math.pi)


class TestBuildingBlocks:
    def test_psi_at_zero(self):
        assert psi_time(1, 1.5, 0.0) == pytest.approx(coefficient(1, 1.5) / SQRT_2PI, rel=1e-15)

    def test_psi_sinc_zero(self):
        a = coefficient(2, 1.5)
        assert abs(psi_time(2, 1.5, 2 * math.pi / a)) < 1e-17

    def test_psi_l1(self):
        # |psi_j| is even; the oscillating sinc^2 tail beyond 2000 periods is bounded by 1/(pi^2 x)
        a = coefficient(1, 1.5)
        L = 2 * math.pi / a
        head = sum(quad(lambda t: abs(psi_time(1, 1.5, t)), k * L, (k + 1) * L, epsabs=1e-14)[0] for k in range(2000))
        tail = a / SQRT_2PI * (L / (math.pi ** 2 * 2000)) / 2
        assert 2 * head == pytest.approx(SQRT_2PI, abs=2 * tail + 1e-6)

    @pytest.mark.parametrize("j", [1, -3, 5])
    def test_triangle(self, j):
        a = coefficient(j, 1.5)
        assert psi_freq(j, 1.5, j) == 1.0
        assert abs(psi_freq(j, 1.5, j + a)) < 1e-15 and abs(psi_freq(j, 1.5, j - a)) < 1e-15
        assert quad(lambda v: psi_freq(j, 1.5, v), j - a, j + a, points=[j])[0] == pytest.approx(a, rel=1e-12)

    def test_delta(self):
        assert psi_freq(2, 1.5, 3) == 0.0

    def test_j_zero(self):
        for fn in (psi_time, psi_freq):
            with pytest.raises(DomainError):
                fn(0, 1.5, 0.0)

    @settings(max_examples=50, deadline=None)
    @given(alpha=st.floats(1.01, 6.0))
    def test_disjoint_supports(self, alpha):
        j = np.arange(1, 513, dtype=float)
        a = j ** -alpha / (alpha + 1)
        assert np.all(a <= 1 / (alpha + 1)) and np.all(a > 0)
        assert np.all((j + a)[:-1] < (j - a)[1:])
        assert np.all(j + a < j + 0.5)


class TestPhi:
    @pytest.mark.parametrize("alpha", [1.25, 1.5, 2.0, 3.0])
    def test_integer_values(self, alpha):
        e = ExtremalFunction(alpha)
        k = np.arange(1, e.J_max + 1, dtype=float)
        np.testing.assert_allclose(phi_freq(e, k), k ** -alpha, rtol=1e-15)
        np.testing.assert_allclose(phi_freq(e, -k), k ** -alpha, rtol=1e-15)

    def test_zeros(self):
        e = ExtremalFunction(1.5)
        assert phi_freq(e, 0.0) == 0.0
        assert np.all(phi_freq(e, np.arange(0, 40) + 0.5) == 0.0)

    def test_time_at_zero(self):
        e = ExtremalFunction(1.5, J_max=64)
        j = np.arange(1, 65, dtype=float)
        expected = 2 / SQRT_2PI * math.fsum(coefficient(1, 1.5) * j ** -3.0)
        assert float(phi_time(e, 0.0)) == pytest.approx(expected, rel=1e-14)

    def test_time_is_pair_sum(self):
        e = ExtremalFunction(1.5, J_max=8)
        t = np.array([-3.1, 0.2, 7.0])
        direct = sum((psi_time(j, 1.5, t) + psi_time(-j, 1.5, t)) / j ** 1.5 for j in range(1, 9))
        assert np.max(np.abs(direct.imag)) < 1e-16
        np.testing.assert_allclose(phi_time(e, t), direct.real, rtol=1e-13, atol=1e-16)

    def test_tail_bound(self):
        e = ExtremalFunction(2.0, J_max=100)
        j = np.arange(101, 200001, dtype=float)
        approx = 2 / ((3.0) * SQRT_2PI) * math.fsum(j ** -4.0)
        assert e.time_tail_bound() == pytest.approx(approx, rel=1e-6)

    def test_l1_norm(self):
        # ||phi||_1 <= sqrt(2 pi) sum' |j|^-alpha, checked on a truncated phi over a long window
        e = ExtremalFunction(2.0, J_max=8)
        t = np.linspace(-400, 400, 800001)
        val = trapezoid(np.abs(phi_time(e, t)), t)
        assert val <= SQRT_2PI * 2 * math.fsum(k ** -2.0 for k in range(1, 9))

    def test_sup_at_one(self):
        e = ExtremalFunction(1.5, J_max=64)
        v = np.linspace(0.5, 64.5, 640001)
        g = v ** 1.5 * phi_freq(e, v)
        assert abs(g.max() - 1.0) <= 1e-10
        assert phi_freq(e, 1.0) == 1.0

    def test_validation(self):
        for kw in ({"alpha": 1.0}, {"alpha": 1.5, "J_max": 0}, {"alpha": 1.5, "sigma_scale": 0.0}):
            with pytest.raises(DomainError):
                ExtremalFunction(**kw)
        with pytest.raises(DomainError):
            scale(ExtremalFunction(1.5), -1.0)


class TestScaling:
    def test_identity(self):
        e = ExtremalFunction(1.5)
        assert scale(e, 1.0) == e

    @pytest.mark.parametrize("sigma", [0.5, 4.0, 10.0])
    def test_integer_values(self, sigma):
        e = scale(ExtremalFunction(1.5), sigma)
        k = np.arange(1, 50, dtype=float)
        np.testing.assert_allclose(phi_freq(e, k * sigma), k ** -1.5, rtol=1e-14)

    @pytest.mark.parametrize("sigma", [2.0, 4.0])
    def test_remainder_invariance(self, sigma):
        e = ExtremalFunction(2.0, J_max=64)
        R1 = remainder_spectral(e.spectrum(64), 1.0, 64).value
        Rs = remainder_spectral(scale(e, sigma).spectrum(64), sigma, 64).value
        assert Rs == pytest.approx(R1, rel=1e-14)
        assert R1.real == pytest.approx(-SQRT_2PI * 2 * math.fsum(k ** -2.0 for k in range(1, 65)), rel=1e-14)

    @pytest.mark.parametrize("s", [1.5, 2.0])
    def test_distance_scaling(self, s):
        e = ExtremalFunction(s)
        d1 = dist_bernstein(e.spectrum(), DistanceQuery(s, 1.0)).value
        d4 = dist_bernstein(scale(e, 4.0).spectrum(), DistanceQuery(s, 4.0)).value
        assert d4 == pytest.approx(4.0 ** s * d1, rel=1e-8)
        assert d1 == pytest.approx(1.0, abs=1e-12)


class TestProperties:
    @pytest.mark.parametrize("alpha", [1.25, 1.5, 2.0, 3.0])
    def test_all_pass(self, alpha):
        report = verify_properties(ExtremalFunction(alpha))
        failed = [c.name for c in report if not c.passed]
        assert not failed
        tags = {c.name.split()[0] for c in report}
        assert tags == {f"({r})" for r in ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi")}

    def test_viii_example(self):
        report = verify_properties(ExtremalFunction(1.5), js=(3,))
        c = next(c for c in report if c.name.startswith("(viii) sup"))
        assert c.measured == pytest.approx(3 ** 1.5, rel=1e-12)


class TestSharpness:
    def test_alpha_15(self):
        r = sharpness_check(ExtremalFunction(1.5), 1.0)
        expected = 2 * SQRT_2PI * float(mp_zeta(1.5))
        assert r.lhs == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(13.0965078, abs=1e-7)
        assert r.ratio == pytest.approx(1.0, abs=1e-6)

    def test_alpha_2(self):
        r = sharpness_check(ExtremalFunction(2.0), 1.0)
        assert r.lhs == pytest.approx(2 * SQRT_2PI * math.pi ** 2 / 6, rel=1e-14)
        assert r.ratio == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("alpha", [1.25, 1.5, 2.0, 3.0])
    @pytest.mark.parametrize("sigma", [1.0, 4.0])
    def test_grid(self, alpha, sigma):
        r = sharpness_check(ExtremalFunction(alpha), sigma)
        assert r.ratio == pytest.approx(1.0, abs=1e-6)

    def test_integer_order_distance(self):
        # integer alpha: the fractional and ordinary derivative weights coincide, so the integer kind agrees
        from poissonquad import bound_distance
        e = ExtremalFunction(2.0)
        b = bound_distance(scale(e, 4.0).pair(), 2, 2 * math.pi / 4.0, integer_mode=True)
        assert b.value == pytest.approx(sharpness_check(e, 4.0).rhs, rel=1e-10)
