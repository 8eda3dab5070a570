"""The extremal function: disjoint triangular spectra that make the distance bound an equality.

``phi(t) = sum_{j != 0} psi_j(t) / |j|^alpha`` with
``psi_j(t) = (a_j / sqrt(2 pi)) sinc^2(a_j t / (2 pi)) e^{ijt}`` and
``a_j = |j|^-alpha / (alpha + 1)``; the transform of ``psi_j`` is the triangle
of half-width ``a_j`` centered at ``j``.  The scaled family is
``phi_sigma(t) = sigma phi(sigma t)`` with ``phihat_sigma(v) = phihat(v / sigma)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import quad

from ._integrate import csum
from ._zeta import hurwitz_zeta, zeta
from .corpus import DecayHint, FunctionPair, RealFunction, SpectralFunction
from .distance import DistanceQuery, dist_bernstein
from .errors import DomainError

SQRT_2PI = math.sqrt(2.0 * math.pi)


def coefficient(j, alpha):
    """``a_j = (alpha + 1)^-1 |j|^-alpha``."""
    if j == 0:
        raise DomainError("a_j is defined for j != 0")
    return abs(j) ** -alpha / (alpha + 1.0)


def psi_time(j, alpha, t):
    if j == 0:
        raise DomainError("psi_j is defined for j != 0")
    a = coefficient(j, alpha)
    t = np.asarray(t, dtype=float)
    return a / SQRT_2PI * np.sinc(a * t / (2 * math.pi)) ** 2 * np.exp(1j * j * t)


def psi_freq(j, alpha, v):
    if j == 0:
        raise DomainError("psi_j is defined for j != 0")
    a = coefficient(j, alpha)
    v = np.asarray(v, dtype=float)
    return np.maximum(0.0, 1.0 - np.abs(v - j) / a)


@dataclass(frozen=True)
class ExtremalFunction:
    alpha: float
    J_max: int = 512
    sigma_scale: float = 1.0

    def __post_init__(self):
        if not self.alpha > 1:
            raise DomainError("the extremal function needs alpha > 1")
        if self.J_max < 1:
            raise DomainError("J_max must be positive")
        if not self.sigma_scale > 0:
            raise DomainError("sigma_scale must be positive")

    def a(self, j):
        return coefficient(j, self.alpha)

    def time_tail_bound(self):
        """Sup-norm bound on the terms ``|j| > J_max`` dropped by :func:`phi_time`."""
        s = 2.0 * self.alpha
        return self.sigma_scale * 2.0 / ((self.alpha + 1.0) * SQRT_2PI) * hurwitz_zeta(s, self.J_max + 1)

    def spectrum(self, J=None):
        """The (untruncated, or truncated at ``|j| <= J``) transform as a SpectralFunction."""
        sig, alpha = self.sigma_scale, self.alpha

        def evaluator(v):
            return _phi_hat(alpha, np.asarray(v, dtype=float) / sig, J) + 0j

        def kinks(lo, hi):
            jlo = max(1, int(math.floor(lo / sig)) - 1)
            jhi = int(math.ceil(hi / sig)) + 1
            if J is not None:
                jhi = min(jhi, J)
            if jhi - jlo > 200_000:
                jhi = jlo + 200_000
            j = np.arange(jlo, jhi + 1, dtype=float)
            a = j ** -alpha / (alpha + 1.0)
            pts = np.concatenate([j - a, j, j + a]) * sig
            pts = np.concatenate([pts, -pts])
            return np.sort(pts[(pts >= lo) & (pts <= hi)])

        support = None if J is None else (J + 0.5) * sig
        return SpectralFunction(evaluator, decay_power=alpha, decay_constant=sig ** alpha, even=True,
                                smooth=False, support=support, kinks=kinks)

    def pair(self, J=None):
        """Time/frequency pair truncated at ``|j| <= J`` (default J_max), so both sides agree."""
        J = self.J_max if J is None else int(J)
        e = replace(self, J_max=J)
        sig = self.sigma_scale
        # |psi_j(t)| <= 4 / (a_j t^2 sqrt(2 pi)); summed over |j| <= J with weights |j|^-alpha
        const = 8.0 * J * (self.alpha + 1.0) / (SQRT_2PI * sig)
        time = RealFunction(f"phi[{self.alpha:g},J={J}]", lambda t: phi_time(e, t),
                            DecayHint.polynomial(2.0, const, 1.0), exact_integral=0.0)
        return FunctionPair(time, self.spectrum(J))


def _phi_hat(alpha, u, J=None):
    j = np.rint(u)
    aj = np.abs(j)
    ok = aj > 0
    if J is not None:
        ok &= aj <= J
    out = np.zeros_like(u, dtype=float)
    ja = aj[ok]
    a = ja ** -alpha / (alpha + 1.0)
    out[ok] = ja ** -alpha * np.maximum(0.0, 1.0 - np.abs(u[ok] - j[ok]) / a)
    return out


def phi_freq(e: ExtremalFunction, v):
    """``phihat_sigma(v)``; at most one triangle is nonzero, found from the nearest integer."""
    v = np.asarray(v, dtype=float)
    return _phi_hat(e.alpha, v / e.sigma_scale)


def phi_time(e: ExtremalFunction, t):
    """``sigma phi(sigma t)`` summed over ``1 <= |j| <= J_max``; real because ``a_j = a_-j``."""
    t = np.asarray(t, dtype=float) * e.sigma_scale
    j = np.arange(1, e.J_max + 1, dtype=float)
    a = j ** -e.alpha / (e.alpha + 1.0)
    w = 2.0 * a * j ** -e.alpha / SQRT_2PI
    flat = t.ravel()
    out = np.empty(flat.shape)
    for s in range(0, flat.size, 4096):
        tt = flat[s:s + 4096, None]
        out[s:s + 4096] = (np.sinc(a * tt / (2 * math.pi)) ** 2 * np.cos(j * tt)) @ w
    return e.sigma_scale * out.reshape(t.shape)


def scale(e: ExtremalFunction, sigma):
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    return replace(e, sigma_scale=e.sigma_scale * sigma)


# ---------------------------------------------------------------------------
# property report

@dataclass(frozen=True)
class PropertyCheck:
    name: str
    passed: bool
    measured: float
    expected: float
    deviation: float


def _check(name, measured, expected, tol, kind="eq"):
    if kind == "eq":
        dev = abs(measured - expected)
        ok = dev <= tol
    else:  # measured <= expected
        dev = max(0.0, measured - expected)
        ok = dev <= tol
    return PropertyCheck(name, bool(ok), float(measured), float(expected), float(dev))


def _triangle_nodes(center, a, n=20):
    x, w = np.polynomial.legendre.leggauss(n)
    nodes = np.concatenate([center - a + 0.5 * a * (x + 1), center + 0.5 * a * (x + 1)])
    weights = np.concatenate([0.5 * a * w, 0.5 * a * w])
    return nodes, weights


def _sinc2_l1():
    # integral of sinc^2 over R equals 1; head on [0, X] with unit panels, tail in closed form
    X = 2000
    x, w = np.polynomial.legendre.leggauss(24)
    k = np.arange(X)[:, None]
    pts = k + 0.5 * (x + 1)
    head = csum(((np.sinc(pts) ** 2) * (0.5 * w)).ravel())
    # integral_X^inf sin^2(pi x)/(pi x)^2 = 1/(2 pi^2 X) - (1/(2 pi^2)) integral_X^inf cos(2 pi x)/x^2
    osc = quad(lambda u: u ** -2.0, X, np.inf, weight="cos", wvar=2 * math.pi, epsabs=1e-16)[0]
    tail = 1.0 / (2 * math.pi ** 2 * X) - osc / (2 * math.pi ** 2)
    return 2.0 * (head + tail)


def verify_properties(e: ExtremalFunction, js=(1, 2, 3, -2, 7), tol=1e-8):
    """Numerical checks of properties (i)-(xi) of the building blocks and of phi."""
    alpha = e.alpha
    out = []
    # (i) ||psi_j||_1 = sqrt(2 pi): |psi_j| is a_j/sqrt(2pi) sinc^2(a_j t / 2pi); substitute x = a_j t / 2pi
    s2 = _sinc2_l1()
    for j in js:
        a = coefficient(j, alpha)
        out.append(_check(f"(i) ||psi_{j}||_1", a / SQRT_2PI * (2 * math.pi / a) * s2, SQRT_2PI, tol))
    # (ii) inverse transform of the triangle reproduces psi_j
    for j in js:
        a = coefficient(j, alpha)
        v, w = _triangle_nodes(j, a)
        t = np.array([-7.3, -1.0, 0.0, 0.4, 2.5, 11.0])
        inv = np.exp(1j * np.outer(t, v)) @ (w * psi_freq(j, alpha, v)) / SQRT_2PI
        dev = float(np.max(np.abs(inv - psi_time(j, alpha, t))))
        out.append(_check(f"(ii) psi_{j} hat is the triangle", dev, 0.0, tol))
    # (iii) supports inside (j - 1/2, j + 1/2)
    amax = max(coefficient(j, alpha) for j in (1, -1))
    edge = max(float(psi_freq(j, alpha, j + s * coefficient(j, alpha) * (1 + 1e-12)))
               for j in js for s in (-1, 1))
    out.append(_check("(iii) max a_j < 1/2", amax, 0.5, 0.0, kind="le"))
    out.append(_check("(iii) psi_j hat vanishes outside its support", edge, 0.0, 0.0))
    # (iv) ||psi_j hat||_1 = a_j
    for j in js:
        a = coefficient(j, alpha)
        v, w = _triangle_nodes(j, a)
        out.append(_check(f"(iv) ||psi_{j} hat||_1", float(w @ psi_freq(j, alpha, v)), a, tol))
    # (v) psi_j hat(k) = delta_jk
    ks = np.arange(-8, 9)
    ks = ks[ks != 0]
    dev = max(float(np.max(np.abs(psi_freq(j, alpha, ks) - (ks == j)))) for j in js)
    out.append(_check("(v) psi_j hat(k) = delta_jk", dev, 0.0, tol))
    # (vi) total variation of the triangle is 2
    for j in js:
        a = coefficient(j, alpha)
        grid = np.linspace(j - 1.5 * a, j + 1.5 * a, 3001)
        grid = np.unique(np.concatenate([grid, [j - a, j, j + a]]))
        tv = csum(np.abs(np.diff(psi_freq(j, alpha, grid))))
        out.append(_check(f"(vi) ||psi_{j} hat'||_1", tv, 2.0, tol))
    # (vii) || |v|^alpha psi_j hat ||_1 <= (|j| + a_j)^alpha a_j
    for j in js:
        a = coefficient(j, alpha)
        v, w = _triangle_nodes(j, a)
        val = float(w @ (np.abs(v) ** alpha * psi_freq(j, alpha, v)))
        out.append(_check(f"(vii) || |v|^a psi_{j} hat ||_1", val, (abs(j) + a) ** alpha * a, tol, kind="le"))
    # (viii) sup |v|^alpha psi_j hat = |j|^alpha, attained at v = j
    for j in js:
        a = coefficient(j, alpha)
        grid = np.unique(np.concatenate([np.linspace(j - a, j + a, 20001), [j]]))
        g = np.abs(grid) ** alpha * psi_freq(j, alpha, grid)
        i = int(np.argmax(g))
        out.append(_check(f"(viii) sup |v|^a psi_{j} hat", float(g[i]), abs(j) ** alpha, tol * abs(j) ** alpha))
        out.append(_check(f"(viii) argmax for j={j}", float(grid[i]), float(j), 0.0))
    # (ix) phi hat(k) = |k|^-alpha
    k = np.arange(1, e.J_max + 1, dtype=float)
    u = np.concatenate([k, -k])
    dev = float(np.max(np.abs(_phi_hat(alpha, u) - np.abs(u) ** -alpha)))
    out.append(_check("(ix) phi hat(k) = |k|^-alpha", dev, 0.0, 1e-15))
    # (x) phi hat bounded by 1 with total variation 4 zeta(alpha) (truncated at J_max, tail in closed form)
    tv_trunc = 4.0 * csum(k ** -alpha)
    out.append(_check("(x) ||phi hat'||_1", tv_trunc + 4.0 * hurwitz_zeta(alpha, e.J_max + 1), 4.0 * zeta(alpha),
                      tol * zeta(alpha)))
    grid = _spectral_grid(alpha, min(e.J_max, 64))
    out.append(_check("(x) sup phi hat", float(np.max(_phi_hat(alpha, grid))), 1.0, tol))
    # (xi) sup |v|^alpha phi hat = 1 at v = 1
    g = np.abs(grid) ** alpha * _phi_hat(alpha, grid)
    sup = float(np.max(g))
    out.append(_check("(xi) sup |v|^a phi hat", sup, 1.0, tol))
    # every integer attains the sup; check that v = 1 does
    out.append(_check("(xi) attained at v=1", float(_phi_hat(alpha, np.array([1.0]))[0]), sup, tol))
    return out


def _spectral_grid(alpha, J, per=401):
    pieces = []
    for j in range(1, J + 1):
        a = j ** -alpha / (alpha + 1.0)
        pieces.append(np.linspace(j - a, j + a, per))
        pieces.append([j - 0.5, j])
    pos = np.concatenate(pieces)
    return np.unique(np.concatenate([pos, -pos]))


# ---------------------------------------------------------------------------
# sharpness

@dataclass(frozen=True)
class SharpnessReport:
    alpha: float
    sigma: float
    lhs: float
    rhs: float
    dist: float

    @property
    def ratio(self):
        return self.lhs / self.rhs


def sharpness_check(e: ExtremalFunction, sigma, K=64):
    """Both sides of the distance bound for ``phi`` scaled to ``sigma``.

    The remainder series is summed directly for ``|k| <= K``; the terms
    beyond are ``|k|^-alpha`` exactly and are added as ``2 zeta(alpha, K+1)``.
    """
    if not sigma > 0:
        raise DomainError("sigma must be positive")
    es = replace(e, sigma_scale=sigma)
    k = np.arange(1, K + 1, dtype=float) * sigma
    terms = np.concatenate([phi_freq(es, k), phi_freq(es, -k)])
    series = csum(terms) + 2.0 * hurwitz_zeta(e.alpha, K + 1)
    lhs = SQRT_2PI * abs(series)
    h = 2 * math.pi / sigma
    dist = dist_bernstein(es.spectrum(), DistanceQuery(e.alpha, sigma)).value
    rhs = h ** e.alpha * 2.0 * zeta(e.alpha) / (2 * math.pi) ** (e.alpha - 0.5) * dist
    return SharpnessReport(e.alpha, sigma, lhs, rhs, dist)
