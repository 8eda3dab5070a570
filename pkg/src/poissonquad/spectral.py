"""The quadrature remainder computed from the Fourier transform.

``R_sigma(f) = -sqrt(2 pi) * sum_{k != 0} fhat(k sigma)``, where ``h = 2 pi / sigma``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._integrate import csum, integrate
from ._zeta import hurwitz_zeta
from .errors import DecayPowerMissing, DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)
K_MAX = 10 ** 6
TAIL_TARGET = 1e-12


@dataclass(frozen=True)
class SpectralRemainder:
    sigma: float
    K: int
    value: complex
    tail_bound: float
    tail_estimate: complex = 0j

    @property
    def real(self):
        return self.value.real


def _tail_bound(fhat, sigma, K, sides=2):
    """Bound on ``sqrt(2 pi) * sum_{|k| > K} |fhat(k sigma)|``."""
    if fhat.support is not None and (K + 1) * sigma >= fhat.support:
        return 0.0
    bound = math.inf
    if fhat.exp_envelope is not None:
        C, r = fhat.exp_envelope
        q = math.exp(-r * sigma)
        bound = SQRT_2PI * sides * C * q ** (K + 1) / (1.0 - q)
    p, C = fhat.decay_power, fhat.decay_constant
    if p is None or C is None or p <= 1:
        return bound
    if C == 0:
        return 0.0
    return min(bound, SQRT_2PI * sides * C * sigma ** -p * hurwitz_zeta(p, K + 1))


def default_K(fhat, sigma):
    """Smallest K whose tail bound is below 1e-12, capped at 10^6."""
    if fhat.support is not None:
        return max(1, int(math.ceil(fhat.support / sigma)))
    if fhat.exp_envelope is not None:
        K = 1
        while _tail_bound(fhat, sigma, K) >= TAIL_TARGET and K < K_MAX:
            K *= 2
        return K
    p, C = fhat.decay_power, fhat.decay_constant
    if p is None or C is None or p <= 1:
        return K_MAX
    if C == 0:
        return 1
    # sum_{k>K} k^-p <= K^(1-p)/(p-1)
    scale = 2 * SQRT_2PI * C * sigma ** -p / (p - 1)
    K = int(math.ceil((scale / TAIL_TARGET) ** (1.0 / (p - 1)))) if scale > TAIL_TARGET else 1
    K = min(max(K, 1), K_MAX)
    while K > 1 and _tail_bound(fhat, sigma, K // 2) < TAIL_TARGET:
        K //= 2
    return K


def _integral_tail(fhat, a, sign):
    # midpoint-rule image of the discarded series: sum_{k>K} g(k) ~ int_{K+1/2}^inf g
    # v = a/u maps [a, inf) onto (0, 1]
    def integrand(u):
        return np.asarray(fhat(sign * a / u), dtype=complex) * (a / (u * u))

    val, _ = integrate(integrand, np.linspace(0.0, 1.0, 9), abstol=1e-18, reltol=1e-12)
    return complex(val)


def _corrected(fhat, sigma, K, bound):
    return fhat.smooth and fhat.kind != "numeric" and np.isfinite(bound) and bound > 1e-15


def remainder_spectral(fhat, sigma, K=None, correct_tail=True, require_bound=False):
    """Fourier-side remainder over ``1 <= |k| <= K``, summed by increasing ``|k|``.

    With ``correct_tail`` (and a smooth spectrum) the discarded part of the
    series is estimated by the integral of ``fhat`` beyond ``(K + 1/2) sigma``
    and included in ``value``; ``tail_bound`` always bounds the raw truncation.
    """
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    if K is None:
        K = default_K(fhat, sigma)
    K = int(K)
    if K < 1:
        raise DomainError("K must be at least 1")
    k = np.arange(1, K + 1, dtype=float) * sigma
    pos = np.asarray(fhat(k), dtype=complex)
    neg = np.asarray(fhat(-k), dtype=complex)
    terms = np.empty(2 * K, dtype=complex)
    terms[0::2] = pos
    terms[1::2] = neg
    total = csum(terms)
    bound = _tail_bound(fhat, sigma, K)
    if require_bound and not np.isfinite(bound):
        raise DecayPowerMissing("tail bound requested but the spectrum has no decay power")
    tail = 0j
    if correct_tail and _corrected(fhat, sigma, K, bound):
        a = (K + 0.5) * sigma
        tail = (_integral_tail(fhat, a, +1) + _integral_tail(fhat, a, -1)) / sigma
    value = -SQRT_2PI * (total + tail)
    if fhat.even and abs(value.imag) > 1e-12:
        raise DomainError(f"spectrum registered as real and even gives complex remainder {value}")
    return SpectralRemainder(sigma=sigma, K=K, value=complex(value), tail_bound=bound,
                             tail_estimate=-SQRT_2PI * tail)


def _check_even_real(fhat):
    probe = np.array([0.37, 1.3, 2.9, 7.1])
    plus = np.asarray(fhat(probe), dtype=complex)
    minus = np.asarray(fhat(-probe), dtype=complex)
    scale = max(1.0, float(np.max(np.abs(plus))))
    if np.max(np.abs(plus.imag)) > 1e-12 * scale or np.max(np.abs(plus - minus)) > 1e-12 * scale:
        raise DomainError("remainder_even needs a real, even spectrum")


def remainder_even(fhat_even, sigma, K=None, correct_tail=True):
    """``-2 sqrt(2 pi) sum_{k=1}^K fhat_e(k sigma)`` for a real even spectrum."""
    _check_even_real(fhat_even)
    if sigma <= 0:
        raise DomainError("sigma must be positive")
    if K is None:
        K = default_K(fhat_even, sigma)
    K = int(K)
    k = np.arange(1, K + 1, dtype=float) * sigma
    total = csum(np.real(np.asarray(fhat_even(k), dtype=complex)))
    bound = _tail_bound(fhat_even, sigma, K)
    tail = 0.0
    if correct_tail and _corrected(fhat_even, sigma, K, bound):
        tail = _integral_tail(fhat_even, (K + 0.5) * sigma, +1).real / sigma
    return -2.0 * SQRT_2PI * (total + tail)
