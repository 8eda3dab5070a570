"""The trapezoidal rule over the whole real line, ``h * sum_k f(h k)``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._integrate import csum
from .errors import DecayHintMissing, DomainError, NoReferenceIntegral, NonFiniteSample


@dataclass(frozen=True)
class QuadratureResult:
    h: float
    N: int
    S: float
    truncation_bound: float
    error: Optional[float] = None

    def normalized_error(self, p):
        if self.error is None or p is None:
            return None
        return self.error / self.h ** p


def default_N(f, h):
    """Truncation index used for the published tables: 100/h, or 10^4/h for algebraic decay."""
    if f.decay is not None and f.decay.kind == "polynomial":
        return int(math.ceil(1e4 / h))
    return int(math.ceil(100.0 / h))


def _samples(f, h, N):
    k = np.arange(1, N + 1, dtype=float)
    pos = f(h * k)
    neg = f(-h * k)
    center = np.atleast_1d(f(np.array([0.0])))
    # fixed order 0, +1, -1, +2, -2, ...
    ordered = np.empty(2 * N + 1, dtype=np.result_type(pos, neg, center))
    ordered[0] = center[0]
    ordered[1::2] = pos
    ordered[2::2] = neg
    return ordered


def trapezoidal_sum(f, h, N=None):
    """``S = h * sum_{|k| <= N} f(h k)`` with correctly rounded summation."""
    return _evaluate(f, h, N)[0]


def _evaluate(f, h, N):
    if h <= 0:
        raise DomainError("h must be positive")
    if N is None:
        N = default_N(f, h)
    N = int(N)
    if N < 1:
        raise DomainError("N must be at least 1")
    values = _samples(f, h, N)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        k = (bad + 1) // 2 * (1 if bad % 2 else -1)
        raise NonFiniteSample(f"{f.name}: sample at k={k} is not finite")
    S = h * csum(values)
    if isinstance(S, complex):
        S = S.real if S.imag == 0 else S
    bound = truncation_bound(f, h, N) if f.decay is not None else math.inf
    signed = None if f.exact_integral is None else _signed_error(values, h, f.exact_integral)
    error = None if signed is None else abs(signed)
    return QuadratureResult(h=h, N=N, S=S, truncation_bound=bound, error=error), signed


def _signed_error(values, h, exact):
    # one compensated sum of the scaled samples and -exact, so the error is not
    # limited by the rounding of S itself
    v = np.asarray(values)
    if np.iscomplexobj(v):
        v = v.real
    return csum(np.append(h * v, -float(exact)))


def truncation_bound(f, h, N):
    """Bound on ``h * sum_{|k| > N} |f(h k)|`` from the decay envelope.

    For a nonincreasing envelope g the sum over ``k > N`` is dominated by
    ``(1/h) * integral_{hN}^inf g``.
    """
    decay = f.decay
    if decay is None:
        raise DecayHintMissing(f"{f.name}: no decay hint")
    a = h * N
    if decay.kind == "compact":
        if a >= decay.radius:
            return 0.0
        raise DecayHintMissing(f"{f.name}: hN={a} is inside the support radius {decay.radius}")
    if a < decay.radius or a == 0:
        raise DecayHintMissing(f"{f.name}: hN={a} is below the monotone radius {decay.radius}")
    return 2.0 * decay.tail_integral(a)


def remainder_exact(pair, h, N=None):
    """``exact_integral - S``: the empirical quadrature remainder for step ``h``."""
    f = pair.time if hasattr(pair, "time") else pair
    if f.exact_integral is None:
        raise NoReferenceIntegral(f"{f.name}: exact integral unknown")
    return -_evaluate(f, h, N)[1]
