"""Numerical values of the remainder bounds.

All kinds except the modulus series have the form
``constant * h**order_exponent * measurement``; the constants are assembled
in one place, :func:`prefactor`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from ._integrate import csum
from ._zeta import zeta
from .corpus import FunctionPair
from .distance import DistanceQuery, dist_bernstein
from .errors import DerivativeUnavailable, DomainError
from .fractional import riesz_function
from .smoothness import l1_norm, modulus, modulus_profile

__all__ = ["KINDS", "RemainderBound", "zeta", "prefactor", "bound_modulus_series", "bound_sobolev",
           "bound_fractional", "bound_distance", "riesz_materialized"]

KINDS = ("modulus_series", "sobolev_modulus", "sobolev_norm", "fractional_modulus",
         "fractional_norm", "distance_integer", "distance_fractional")


@dataclass(frozen=True)
class RemainderBound:
    kind: str
    value: float
    h: float
    order_exponent: float
    constant: float
    measurement: float
    divergent: bool = False

    def __float__(self):
        return float(self.value)


def prefactor(kind, s, r=None):
    """The constant multiplying ``h**s * measurement`` for ``kind``."""
    if kind in ("sobolev_modulus", "fractional_modulus"):
        return zeta(s) / (math.pi ** s * 2.0 ** (r + s - 1))
    if kind in ("sobolev_norm", "fractional_norm"):
        return zeta(s) / (math.pi ** s * 2.0 ** (s - 1))
    if kind in ("distance_integer", "distance_fractional"):
        return 2.0 * zeta(s) / (2.0 * math.pi) ** (s - 0.5)
    raise DomainError(f"no prefactor for kind {kind!r}")


def _assemble(kind, s, h, measurement, r=None):
    c = prefactor(kind, s, r)
    return RemainderBound(kind=kind, value=c * h ** s * measurement, h=h, order_exponent=s,
                          constant=c, measurement=measurement)


def _time(f):
    return f.time if isinstance(f, FunctionPair) else f


def bound_modulus_series(f, r, sigma, K=200, grid_n=16, tol=1e-10):
    """``2^(1-r) sum_{k=1}^K omega_r(f; pi/(sigma k))``.

    ``divergent`` is set when the last term exceeds 1e-3 of the partial sum.
    """
    if r < 1 or not sigma > 0 or K < 1:
        raise DomainError("need r >= 1, sigma > 0, K >= 1")
    f = _time(f)
    deltas = [math.pi / (sigma * k) for k in range(1, K + 1)]
    prof = modulus_profile(f, r, deltas, grid_n, tol)
    # profile is sorted by delta ascending, i.e. k descending
    terms = list(prof.values)[::-1]
    c = 2.0 ** (1 - r)
    total = csum(terms)
    value = c * total
    divergent = total > 0 and terms[-1] > 1e-3 * total
    return RemainderBound(kind="modulus_series", value=value, h=2 * math.pi / sigma, order_exponent=0.0,
                          constant=c, measurement=total, divergent=divergent)


def bound_sobolev(f, s, r, h, use_norm=True, grid_n=32, tol=1e-10):
    """Bound from the s-th derivative: its L1 norm, or its r-th modulus at ``h/2``."""
    if s < 2:
        raise DomainError("the Sobolev bound needs s >= 2")
    f = _time(f)
    d = f.derivatives.get(s)
    if d is None:
        raise DerivativeUnavailable(f"{f.name}: derivative of order {s} not registered")
    if use_norm:
        return _assemble("sobolev_norm", s, h, l1_norm(d, tol))
    return _assemble("sobolev_modulus", s, h, modulus(d, r, h / 2, grid_n, tol), r)


@lru_cache(maxsize=64)
def riesz_materialized(pair, alpha):
    """Cached :func:`fractional.riesz_function` (pairs hash by identity)."""
    return riesz_function(pair, alpha)


def bound_fractional(pair, alpha, r, h, use_norm=True, grid_n=12, tol=1e-8):
    """Bound from the Riesz derivative of order ``alpha > 1``."""
    if not alpha > 1:
        raise DomainError("the fractional bound needs alpha > 1")
    D = riesz_materialized(pair, float(alpha))
    if use_norm:
        return _assemble("fractional_norm", alpha, h, l1_norm(D, tol))
    return _assemble("fractional_modulus", alpha, h, modulus(D, r, h / 2, grid_n, tol), r)


def bound_distance(pair, order, h, integer_mode=False, n_grid=4096):
    """Bound through ``dist(D^order f, B_sigma)`` with ``sigma = 2 pi / h``."""
    if integer_mode:
        if order != int(order) or order < 2:
            raise DomainError("integer mode needs an integer order >= 2")
    elif not order > 1:
        raise DomainError("the distance bound needs order > 1")
    sigma = 2 * math.pi / h
    d = dist_bernstein(pair.freq, DistanceQuery(order, sigma, n_grid))
    kind = "distance_integer" if integer_mode else "distance_fractional"
    return _assemble(kind, order, h, d.value)
