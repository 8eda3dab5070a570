"""Finite differences, L1 norms and L1 moduli of smoothness."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import comb

from ._integrate import integrate, loglog_slope
from .errors import DegenerateFit, DomainError, NonIntegrableDecay

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class ModulusProfile:
    r: int
    deltas: tuple
    values: tuple

    def __post_init__(self):
        if list(self.deltas) != sorted(self.deltas):
            raise DomainError("deltas must be sorted")


def _binomials(r):
    return [float(comb(r, j, exact=True)) for j in range(r + 1)]


def forward_difference(f, r, h, x):
    """``sum_j (-1)^(r-j) C(r, j) f(x + j h)``; vectorized in ``x``."""
    if r < 1:
        raise DomainError("r must be at least 1")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for j, c in enumerate(_binomials(r)):
        out = out + (-1) ** (r - j) * c * f(x + j * h)
    return out


def central_difference(f, j, u, x):
    """``sum_k (-1)^k C(2j, k) f(x + (j - k) u)``; vectorized in ``x``."""
    if j < 1:
        raise DomainError("j must be at least 1")
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for k, c in enumerate(_binomials(2 * j)):
        out = out + (-1) ** k * c * f(x + (j - k) * u)
    return out


def _radius(f, tol):
    if f.decay is None:
        raise NonIntegrableDecay(f"{f.name}: no decay hint, cannot truncate the real line")
    return f.decay.radius_for(tol)


def _abs_integral(g, edges, tol):
    value, _ = integrate(lambda x: np.abs(g(x)), edges, abstol=tol, reltol=1e-13)
    return float(value)


def l1_norm(f, tol=1e-10):
    """``integral |f|`` over the range outside of which the decay hint leaves less than ``tol/2``."""
    R = _radius(f, 0.5 * tol)
    if R == 0:
        return 0.0
    edges = [-R, R] + [b for b in f.breakpoints if -R < b < R]
    edges += list(np.linspace(-R, R, 9))
    return _abs_integral(f, edges, 0.5 * tol)


def difference_l1(f, r, h, tol=1e-10):
    """``||Delta_h^r f||_1``."""
    h = float(h)
    if h == 0:
        return 0.0
    # the tails of Delta_h^r f are dominated by 2^r times those of f
    R = _radius(f, tol / 2 ** (r + 1))
    if R == 0:
        return 0.0
    lo, hi = min(-R, -R - r * h), max(R, R - r * h)
    edges = [lo, hi] + list(np.linspace(lo, hi, 9))
    for j in range(r + 1):
        edges += [b - j * h for b in f.breakpoints if lo < b - j * h < hi]
        edges += [s - j * h for s in (-R, R) if lo < s - j * h < hi]
    return _abs_integral(lambda x: forward_difference(f, r, h, x), edges, 0.5 * tol)


def _grid_sup(f, r, hs, tol):
    values = np.array([difference_l1(f, r, h, tol) for h in hs])
    return values


def modulus(f, r, delta, grid_n=32, tol=1e-10):
    """``sup_{0 < h <= delta} ||Delta_h^r f||_1`` sampled on a grid, refined once near the argmax.

    Sampling can only miss the supremum, so the estimate is biased low.
    """
    if r < 1:
        raise DomainError("r must be at least 1")
    if delta <= 0:
        raise DomainError("delta must be positive")
    if grid_n < 8:
        raise DomainError("grid_n must be at least 8")
    hs = np.linspace(delta / grid_n, delta, grid_n)
    values = _grid_sup(f, r, hs, tol)
    i = int(np.argmax(values))
    best = float(values[i])
    lo = hs[max(i - 1, 0)] if i > 0 else 0.5 * hs[0]
    hi = hs[min(i + 1, grid_n - 1)]
    if hi > lo:
        fine = np.linspace(lo, hi, grid_n)
        best = max(best, float(np.max(_grid_sup(f, r, fine, tol))))
    return best


def modulus_profile(f, r, deltas: Sequence[float], grid_n=32, tol=1e-10):
    """Moduli at several ``delta`` from one shared log grid and a running maximum."""
    deltas = np.sort(np.asarray(deltas, dtype=float))
    if deltas.size == 0:
        return ModulusProfile(r, (), ())
    if deltas[0] <= 0:
        raise DomainError("deltas must be positive")
    lo = deltas[0] / grid_n
    n_log = max(grid_n, int(grid_n * math.log10(deltas[-1] / lo) + 1))
    hs = np.unique(np.concatenate([np.geomspace(lo, deltas[-1], n_log), deltas]))
    g = _grid_sup(f, r, hs, tol)
    running = np.maximum.accumulate(g)
    idx = np.searchsorted(hs, deltas)
    return ModulusProfile(r, tuple(float(d) for d in deltas), tuple(float(running[i]) for i in idx))


def fourier_bound_from_modulus(f, r, v, grid_n=32, tol=1e-10):
    """``2^(-r) (2 pi)^(-1/2) omega_r(f; pi/|v|)``, an upper bound for ``|fhat(v)|``."""
    if v == 0:
        raise DomainError("v must be nonzero")
    return modulus(f, r, math.pi / abs(v), grid_n, tol) / (2 ** r * SQRT_2PI)


def lipschitz_order_estimate(f, r, deltas, grid_n=16, tol=1e-12):
    """Fitted exponent alpha in ``omega_r(f; delta) ~ delta^alpha``, capped at ``r``."""
    deltas = np.sort(np.asarray(deltas, dtype=float))
    if deltas.size < 4 or deltas[-1] / deltas[0] < 10.0 * (1 - 1e-12):
        raise DomainError("need at least 4 deltas spanning a decade")
    values = np.array(modulus_profile(f, r, deltas, grid_n, tol).values)
    if np.all(values < 1e-14):
        raise DegenerateFit(f"{f.name}: all moduli are below 1e-14")
    keep = values > 0
    if keep.sum() < 2:
        raise DegenerateFit(f"{f.name}: too few nonzero moduli")
    return min(float(r), loglog_slope(deltas[keep], values[keep]))
