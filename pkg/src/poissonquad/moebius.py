"""Moebius inversion of the remainder sequence and the translation sweep."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._integrate import csum, loglog_slope
from ._zeta import zeta
from .corpus import even_part, translate
from .distance import DistanceQuery, dist_bernstein
from .errors import DegenerateFit, DomainError, InsufficientDecay
from .quadrature import remainder_exact
from .spectral import default_K, remainder_spectral

SQRT_2PI = math.sqrt(2.0 * math.pi)
SERIES_K_CAP = 4096


def mobius_mu(n):
    """Moebius function by trial division."""
    n = int(n)
    if n < 1:
        raise DomainError("mu(n) needs n >= 1")
    sign = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            sign = -sign
        p += 1 if p == 2 else 2
    if n > 1:
        sign = -sign
    return sign


@dataclass(frozen=True)
class RemainderSequence:
    """``values[k-1] = R_{k sigma}`` for ``k = 1..K``."""

    sigma: float
    values: tuple
    source: str = "spectral"
    decay_power: Optional[float] = None

    def __post_init__(self):
        if len(self.values) < 8:
            raise DomainError("a remainder sequence needs K >= 8")
        if not all(math.isfinite(v) for v in self.values):
            raise DomainError("remainder values must be finite")
        if self.source not in ("exact", "spectral"):
            raise DomainError(f"unknown source {self.source!r}")

    @property
    def K(self):
        return len(self.values)


def remainder_sequence(pair, sigma, K=64, source="spectral"):
    """``R_{k sigma}(f)`` for ``k = 1..K``."""
    values = []
    for k in range(1, K + 1):
        s = k * sigma
        if source == "spectral":
            Kser = min(default_K(pair.freq, s), SERIES_K_CAP)
            values.append(remainder_spectral(pair.freq, s, Kser).value.real)
        elif source == "exact":
            values.append(remainder_exact(pair, 2 * math.pi / s))
        else:
            raise DomainError(f"unknown source {source!r}")
    return RemainderSequence(sigma, tuple(values), source, pair.freq.decay_power)


@dataclass(frozen=True)
class Recovery:
    value: float
    partial: float
    tail_estimate: float
    K: int

    def __float__(self):
        return float(self.value)


def recover_spectrum(seq: RemainderSequence) -> Recovery:
    """``fhat_e(sigma) = -(1/(2 sqrt(2 pi))) sum_k mu(k) R_{k sigma}``.

    The discarded part of the series is estimated from the decay power p:
    ``R_{k sigma} ~ A k^-p`` with A fitted at k = K, and
    ``sum_{k>K} mu(k) k^-p = 1/zeta(p) - sum_{k<=K} mu(k) k^-p``.
    """
    K = seq.K
    mu = [mobius_mu(k) for k in range(1, K + 1)]
    partial = csum([m * r for m, r in zip(mu, seq.values)])
    tail = 0.0
    p = seq.decay_power
    if p is not None and math.isfinite(p) and p > 1 and seq.values[-1] != 0:
        A = seq.values[-1] * K ** p
        tail = A * (1.0 / zeta(p) - csum([m * k ** -p for k, m in enumerate(mu, start=1)]))
    scale = -1.0 / (2.0 * SQRT_2PI)
    value = scale * (partial + tail)
    if abs(scale * tail) > 1e-3 * abs(value) and value != 0:
        raise InsufficientDecay(f"estimated series tail {abs(scale * tail):.3g} exceeds 1e-3 of the result")
    return Recovery(value=value, partial=scale * partial, tail_estimate=scale * tail, K=K)


def translation_sweep(pair, sigma, taus: Sequence[float], K=None, correct_tail=True):
    """Spectral remainders of ``f(tau + .)`` for each tau in one period."""
    period = 2 * math.pi / sigma
    out = []
    for tau in taus:
        if abs(tau) > 0.5 * period * (1 + 1e-12):
            raise DomainError(f"tau={tau} outside [-pi/sigma, pi/sigma]")
        F = translate(pair, tau).freq
        out.append(remainder_spectral(F, sigma, K, correct_tail=correct_tail).value)
    return out


@dataclass(frozen=True)
class ParsevalCheck:
    mean_square: float
    spectral_sum: float
    K: int
    ntau: int

    @property
    def deviation(self):
        return abs(self.mean_square - self.spectral_sum)


def parseval_check(pair, sigma, ntau=64, K=None):
    """Period mean of ``|R_sigma(f_tau)|^2`` against ``2 pi sum_{0<|k|<=K} |fhat(k sigma)|^2``.

    With ``K < ntau/2`` the squared remainder is a trigonometric polynomial of
    degree below ``ntau`` and the trapezoidal mean over ``ntau`` shifts is exact.
    """
    if K is None:
        K = ntau // 2 - 1
    if not 2 * K < ntau:
        raise DomainError("need 2K < ntau for an exact period mean")
    period = 2 * math.pi / sigma
    taus = -0.5 * period + period * np.arange(ntau) / ntau
    R = np.array(translation_sweep(pair, sigma, taus, K=K, correct_tail=False))
    mean_sq = csum(np.abs(R) ** 2) / ntau
    k = np.arange(1, K + 1) * sigma
    F = pair.freq
    spec = 2 * math.pi * csum(np.concatenate([np.abs(F(k)) ** 2, np.abs(F(-k)) ** 2]))
    return ParsevalCheck(mean_sq, spec, K, ntau)


@dataclass(frozen=True)
class OrderCheck:
    dist_slope: float
    remainder_slope: float
    consistent: bool
    degenerate: bool = False


def equivalence_order_check(pair, alpha, sigma_grid, tol=0.1):
    """Fitted decay rates of ``dist(D^alpha f_e, B_sigma)`` and ``|R_sigma(f)|`` in sigma.

    Consistency means ``beta_r = alpha + beta_d`` within ``tol``.
    """
    sig = np.sort(np.asarray(sigma_grid, dtype=float))
    if sig.size < 4 or math.log10(sig[-1] / sig[0]) < 1.5 - 1e-12:
        raise DomainError("sigma grid must have 4+ points spanning 1.5 decades")
    F = even_part(pair).freq
    dist = np.array([dist_bernstein(F, DistanceQuery(alpha, s)).value for s in sig])
    rem = np.array([abs(remainder_spectral(pair.freq, s).value) for s in sig])
    if np.all(dist == 0) and np.all(rem < 1e-300):
        return OrderCheck(math.nan, math.nan, True, degenerate=True)
    if np.any(dist <= 0) or np.any(rem <= 1e-300):
        raise DegenerateFit("distance or remainder vanishes on part of the grid")
    beta_d = -loglog_slope(sig, dist)
    beta_r = -loglog_slope(sig, rem)
    return OrderCheck(beta_d, beta_r, abs(beta_r - (alpha + beta_d)) <= tol)
