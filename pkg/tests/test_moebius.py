import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from poissonquad import (equivalence_order_check, even_part, get_pair, mobius_mu, parseval_check, recover_spectrum,
                         remainder_sequence, remainder_spectral, translate, translation_sweep)
from poissonquad._integrate import loglog_slope
from poissonquad.errors import DomainError, InsufficientDecay
from poissonquad.moebius import RemainderSequence

SQRT_2PI = math.sqrt(2 * math.pi)


def f1_hat(v):
    return math.sqrt(2) / (math.sqrt(math.pi) * (1 + v * v))


def f2_hat(v):
    return 2 * math.sqrt(2) * (1 - 3 * v * v) / (math.sqrt(math.pi) * (1 + v * v) ** 3)


class TestMobius:
    def test_values(self):
        assert [mobius_mu(n) for n in (1, 6, 30, 12)] == [1, 1, -1, 0]

    @settings(max_examples=200, deadline=None)
    @given(n=st.integers(1, 10 ** 6))
    def test_against_factorization(self, n):
        exps, m, q = [], n, 2
        while q * q <= m:
            e = 0
            while m % q == 0:
                m //= q
                e += 1
            if e:
                exps.append(e)
            q += 1
        if m > 1:
            exps.append(1)
        expected = 0 if any(e > 1 for e in exps) else (-1) ** len(exps)
        assert mobius_mu(n) == expected

    def test_divisor_sum(self):
        # sum_{d | n} mu(d) = [n == 1]
        for n in range(1, 200):
            assert sum(mobius_mu(d) for d in range(1, n + 1) if n % d == 0) == (n == 1)

    def test_domain(self):
        with pytest.raises(DomainError):
            mobius_mu(0)


class TestRecovery:
    def test_f1(self, f1):
        rec = recover_spectrum(remainder_sequence(f1, 2 * math.pi, 64))
        assert rec.value == pytest.approx(f1_hat(2 * math.pi), abs=1e-6)
        assert rec.K == 64

    @pytest.mark.parametrize("sigma", [2 * math.pi, 4 * math.pi])
    def test_round_trip(self, f1, f2, sigma):
        for p, ref in ((f1, f1_hat), (f2, f2_hat)):
            assert recover_spectrum(remainder_sequence(p, sigma, 64)).value == pytest.approx(ref(sigma), abs=1e-6)

    def test_exact_source(self, f2):
        rec = recover_spectrum(remainder_sequence(f2, 4 * math.pi, 16, source="exact"))
        assert rec.value == pytest.approx(f2_hat(4 * math.pi), abs=1e-6)

    def test_bandlimited(self):
        seq = remainder_sequence(get_pair("fejer"), 1.5, 16)
        assert all(v == 0 for v in seq.values)
        assert recover_spectrum(seq).value == 0

    def test_insufficient_decay(self, f1):
        # a short, slowly decaying sequence leaves too much in the estimated tail
        seq = remainder_sequence(f1, 0.5, 8)
        with pytest.raises(InsufficientDecay):
            recover_spectrum(seq)

    def test_sequence_validation(self):
        with pytest.raises(DomainError):
            RemainderSequence(1.0, (0.1,) * 4)
        with pytest.raises(DomainError):
            RemainderSequence(1.0, (0.1,) * 7 + (math.nan,))


class TestSweep:
    def test_center(self, f1):
        R = translation_sweep(f1, 2 * math.pi, [0.0])[0]
        assert R.real == pytest.approx(-0.163953413738653, abs=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(tau=st.floats(0.0, 0.5))
    def test_even_in_tau(self, tau):
        p = get_pair("f2")
        a, b = translation_sweep(p, 2 * math.pi, [tau, -tau], K=200)
        assert abs(a - b) <= 1e-14

    def test_outside_period(self, f1):
        with pytest.raises(DomainError):
            translation_sweep(f1, 2 * math.pi, [0.6])

    @pytest.mark.parametrize("sigma", [2 * math.pi, 4.0])
    def test_parseval(self, f1, sigma):
        pc = parseval_check(f1, sigma, ntau=64)
        direct = 2 * math.pi * 2 * math.fsum(f1_hat(k * sigma) ** 2 for k in range(1, 32))
        assert pc.deviation <= 1e-10
        assert pc.spectral_sum == pytest.approx(direct, rel=1e-14)

    def test_parseval_needs_resolution(self, f1):
        with pytest.raises(DomainError):
            parseval_check(f1, 1.0, ntau=16, K=8)

    def test_shifted_order(self, f1):
        # remainder of f1 shifted by a quarter period still decays like sigma^-2
        sig = np.geomspace(4, 200, 6)
        R = [abs(remainder_spectral(translate(f1, math.pi / (2 * s)).freq, s).value) for s in sig]
        assert -loglog_slope(sig, R) == pytest.approx(2.0, abs=0.1)


class TestEvenIdentity:
    @pytest.mark.parametrize("name", ["f1", "f2", "f3", "gaussian"])
    @pytest.mark.parametrize("sigma", [math.pi, 2 * math.pi])
    def test_remainder_of_even_part(self, name, sigma):
        p = translate(get_pair(name), 0.3)
        full = remainder_spectral(p.freq, sigma).value
        even = remainder_spectral(even_part(p).freq, sigma).value
        assert abs(full - even) <= 1e-10


class TestSummability:
    def test_partial_sums_cauchy(self, f1):
        # sum k^eps |fhat(k sigma)| with eps = 0.5: gaps between partial sums shrink like K^-1/2
        sigma = 2 * math.pi
        gaps = []
        for K in (100, 400, 1600, 6400):
            k = np.arange(K + 1, 2 * K + 1, dtype=float)
            gaps.append(math.fsum(k ** 0.5 * np.abs(f1.freq(k * sigma).real)))
        ratios = [a / b for a, b in zip(gaps, gaps[1:])]
        assert all(r == pytest.approx(2.0, rel=0.01) for r in ratios)


class TestOrderCheck:
    def test_f2(self, f2):
        oc = equivalence_order_check(f2, 2.0, np.geomspace(4, 200, 6))
        assert oc.consistent and not oc.degenerate
        assert oc.remainder_slope == pytest.approx(4, abs=0.1)
        assert oc.dist_slope == pytest.approx(2, abs=0.1)

    def test_f1(self, f1):
        oc = equivalence_order_check(f1, 1.25, np.geomspace(4, 200, 6))
        assert oc.consistent
        assert oc.remainder_slope == pytest.approx(2, abs=0.1)
        assert oc.dist_slope == pytest.approx(0.75, abs=0.1)

    def test_bandlimited(self):
        oc = equivalence_order_check(get_pair("fejer"), 1.5, np.geomspace(2, 100, 5))
        assert oc.degenerate and oc.consistent

    def test_grid_span(self, f1):
        with pytest.raises(DomainError):
            equivalence_order_check(f1, 1.25, np.geomspace(4, 40, 6))
