"""Riesz fractional derivatives.

The production route is the inverse transform of ``|v|^alpha fhat(v)``; the
difference-quotient route with the constant ``C_{alpha,2j}`` is kept for
cross-validation.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.fft import dct
from scipy.integrate import IntegrationWarning, quad
from scipy.special import comb, gamma, sici

from ._integrate import integrate
from .corpus import DecayHint, FunctionPair, RealFunction
from .errors import DecayHintMissing, DomainError, NoConvergence, NotL1, RieszUnavailable
from .smoothness import central_difference

SQRT_2PI = math.sqrt(2.0 * math.pi)
_QUAD = dict(epsabs=1e-13, epsrel=1e-12, limit=400)

# interpolation layout for materialized derivatives
CHEB_DEGREE = 16
GRADING_FLOOR = 1e-10
FAR_RADIUS = 1024.0


@dataclass(frozen=True)
class RieszSpec:
    alpha: float
    j: Optional[int] = None
    epsilon: float = 1e-4
    domain_radius: Optional[float] = None

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if self.j is not None and not self.alpha < 2 * self.j:
            raise DomainError(f"need alpha < 2j, got alpha={self.alpha}, j={self.j}")
        if not self.epsilon > 0:
            raise DomainError("epsilon must be positive")

    @property
    def order(self):
        # 2j - alpha >= 1.5 keeps the cutoff error ~ eps^(2j-alpha) negligible
        if self.j is not None:
            return self.j
        return max(2, int(math.floor(self.alpha / 2)) + 1, int(math.ceil((self.alpha + 1.5) / 2)))


def _quad(f, a, b, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        opts = dict(_QUAD)
        opts.update(kw)
        if kw.get("weight") == "cos" or kw.get("weight") == "sin":
            if b == np.inf:
                opts.pop("epsrel", None)
                opts["limlst"] = 200
        return quad(f, a, b, **opts)[0]


def _qawf(body, a, t, kind):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(body, a, np.inf, weight=kind, wvar=t, epsabs=_QUAD["epsabs"],
                    limit=_QUAD["limit"], limlst=200, full_output=1)


def _oscillatory_tail(body, body_vec, t, kind):
    """``integral_1^inf body(v) w(v t) dv`` with w = cos or sin, ``t != 0``.

    For slow oscillation the first 20 periods are integrated on panels of a
    few per period before QAWF takes over.  QAWF's cycle extrapolation breaks
    down for integrands that decay faster than any power; those are
    integrated over a finite range instead.
    """
    wv = np.cos if kind == "cos" else np.sin
    start, head = 1.0, 0.0
    if abs(t) < 0.05:
        start = 1.0 + 40.0 * math.pi / abs(t)
        edges = np.concatenate([np.geomspace(1.0, start, 65), np.linspace(1.0, start, 161)])
        head, _ = integrate(lambda v: body_vec(v) * wv(v * t), edges, abstol=1e-14, reltol=1e-13,
                            max_panels=20000)
        if abs(body(start)) * start < 1e-17:
            return head
    out = _qawf(body, start, t, kind)
    if abs(out[0]) < 1e300 and (len(out) == 3 or abs(out[1]) < 1e-10):
        return head + out[0]
    V = 2.0 * start
    while abs(body(V)) * V > 1e-17 and V < 2.0 ** 20 * start:
        V *= 2.0
    if abs(body(V)) * V > 1e-17:
        raise NoConvergence(f"oscillatory integral at t={t} did not converge")
    n = int(math.ceil((V - start) * abs(t) / math.pi)) + 8
    val, _ = integrate(lambda v: body_vec(v) * wv(v * t), np.linspace(start, V, n + 1),
                       abstol=1e-14, reltol=1e-13)
    return head + val


def c_alpha_2j(alpha, j):
    """``(-1)^j 2^(2j - alpha) * integral_0^inf sin(u)^(2j) / u^(1 + alpha) du``."""
    if not 0 < alpha < 2 * j:
        raise DomainError(f"C_(alpha,2j) needs 0 < alpha < 2j, got alpha={alpha}, j={j}")
    # [0, 1]: (sin u / u)^(2j) against the algebraic weight u^(2j-1-alpha)
    head = _quad(lambda u: (np.sinc(u / math.pi)) ** (2 * j), 0.0, 1.0,
                 weight="alg", wvar=(2 * j - 1 - alpha, 0.0))
    # [1, inf): expand sin^(2j) into cosines, each an oscillatory Fourier integral
    tail = comb(2 * j, j, exact=True) / alpha
    for m in range(1, j + 1):
        coef = 2.0 * (-1) ** m * comb(2 * j, j - m, exact=True)
        tail += coef * _quad(lambda u: u ** (-1.0 - alpha), 1.0, np.inf, weight="cos", wvar=2.0 * m)
    tail /= 4.0 ** j
    return (-1) ** j * 2.0 ** (2 * j - alpha) * (head + tail)


# ---------------------------------------------------------------------------
# spectral route

def _parts(F):
    """Even and odd combinations ``G(v) = F(v) + F(-v)``, ``H(v) = F(v) - F(-v)``."""
    def G(v):
        v = np.asarray(v, dtype=float)
        return np.asarray(F(v), dtype=complex) + np.asarray(F(-v), dtype=complex)

    def H(v):
        v = np.asarray(v, dtype=float)
        return np.asarray(F(v), dtype=complex) - np.asarray(F(-v), dtype=complex)

    return G, H


def _scalar(fn, part):
    def g(v):
        val = complex(fn(np.array([v]))[0])
        return val.real if part == "re" else val.imag
    return g


def _upper_exp_integral(beta, x):
    """``E(beta, x) = integral_x^inf u^beta e^{iu} du`` for ``beta < 0`` and ``0 < x <= 4``."""
    if beta < -1:
        # integrate by parts towards beta in [-1, 0)
        return (-x ** (beta + 1) * cmath.exp(1j * x) - 1j * _upper_exp_integral(beta + 1, x)) / (beta + 1)
    if beta == -1:
        si, ci = sici(x)
        return -ci + 1j * (0.5 * math.pi - si)
    # Gamma(beta+1) e^{i pi (beta+1)/2} minus the head integral_0^x, summed as a power series
    full = gamma(beta + 1) * cmath.exp(0.5j * math.pi * (beta + 1))
    head, term, n = 0j, 1.0 + 0j, 0
    while True:
        piece = term * x ** (n + beta + 1) / (n + beta + 1)
        head += piece
        n += 1
        term *= 1j / n
        if abs(piece) < 1e-18 * max(abs(head), 1e-300) and n > 3:
            break
    return full - head


def _power_tail(beta, t, kind):
    """``integral_1^inf v^beta w(v t) dv`` for ``beta < 0``, ``t != 0``."""
    x = abs(t)
    if x <= 4.0:
        E = _upper_exp_integral(beta, x) * x ** (-beta - 1)
        return E.real if kind == "cos" else math.copysign(E.imag, t)
    return _quad(lambda v: v ** beta, 1.0, np.inf, weight=kind, wvar=t)


def _asymptotic_constant(fn, p):
    """``lim v^p fn(v)``, from two far samples that must agree."""
    v1, v2 = 1e6, 1e7
    c1 = complex(fn(np.array([v1]))[0]) * v1 ** p
    c2 = complex(fn(np.array([v2]))[0]) * v2 ** p
    if abs(c1 - c2) > 1e-6 * max(abs(c2), 1e-300) and abs(c2) > 1e-300:
        raise NoConvergence(f"|v|^{p} fhat(v) has no limit at infinity ({c1} vs {c2})")
    return c2


def _transform_half(fn, alpha, t, kind, p):
    """``integral_0^inf v^alpha fn(v) w(vt) dv`` with w = cos or sin.

    The leading power ``C v^(alpha - p)`` of the integrand is split off on
    ``[1, inf)`` and transformed in closed form; what remains decays faster and
    is left to quadrature.
    """
    beta = alpha - p
    C_full = _asymptotic_constant(fn, p) if math.isfinite(p) else 0j
    out = 0j
    for part, unit in (("re", 1.0), ("im", 1j)):
        g = _scalar(fn, part)
        C = C_full.real if part == "re" else C_full.imag

        def body(v, g=g, C=C):
            return v ** alpha * g(v) - (C * v ** beta if C else 0.0)

        def body_vec(v, part=part, C=C):
            val = np.asarray(fn(v), dtype=complex)
            val = val.real if part == "re" else val.imag
            return v ** alpha * val - (C * v ** beta if C else 0.0)

        w = math.cos if kind == "cos" else math.sin
        val = _quad(lambda v: v ** alpha * g(v) * w(v * t), 0.0, 1.0)
        if t == 0.0:
            if kind == "cos":
                val += _quad(body, 1.0, np.inf)
                if C:
                    if beta >= -1:
                        raise NotL1("the Riesz derivative is singular at this point")
                    val += C / (-beta - 1)
        else:
            val += _oscillatory_tail(body, body_vec, t, kind)
            if C:
                val += C * _power_tail(beta, t, kind)
        out += unit * val
    return out


def _compact_nodes(F, S, tmax):
    """Gauss-Legendre nodes and weights on ``[-S, S]`` split at the spectral kinks."""
    kinks = np.unique(np.concatenate([[-S, 0.0, S], F.kink_points(-S, S)]))
    kinks = kinks[(kinks >= -S) & (kinks <= S)]
    x, w = np.polynomial.legendre.leggauss(16)
    nodes, weights = [], []
    for a, b in zip(kinks[:-1], kinks[1:]):
        m = max(1, int(math.ceil((b - a) * tmax / 4.0)))
        e = np.linspace(a, b, m + 1)
        for lo, hi in zip(e[:-1], e[1:]):
            nodes.append(0.5 * (lo + hi) + 0.5 * (hi - lo) * x)
            weights.append(0.5 * (hi - lo) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _riesz_compact(pair, alpha, t):
    F = pair.freq
    S = float(F.support)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if S == 0:
        return np.zeros(t.shape, dtype=complex)
    out = np.empty(t.shape, dtype=complex)
    order = np.argsort(np.abs(t))
    chunk = 256
    for s in range(0, t.size, chunk):
        idx = order[s:s + chunk]
        v, w = _compact_nodes(F, S, float(np.max(np.abs(t[idx]))))
        weighted = w * np.abs(v) ** alpha * np.asarray(F(v), dtype=complex)
        out[idx] = np.exp(1j * np.outer(t[idx], v)) @ weighted / SQRT_2PI
    return out


def _check_integrable(pair, alpha, conditional):
    F = pair.freq
    if F.support is not None:
        return False
    p = F.decay_power
    if p is None:
        raise NotL1(f"{pair.name}: no spectral decay power, |v|^alpha fhat not known to be integrable")
    if p > alpha + 1:
        return False
    if conditional and p > alpha:
        return True
    raise NotL1(f"{pair.name}: |v|^{alpha} fhat(v) is not integrable (decay power {p})")


def riesz_fourier(pair, alpha, t, tol=1e-10, conditional=False):
    """``(2 pi)^(-1/2) integral |v|^alpha fhat(v) e^{ivt} dv``.

    With ``conditional`` the integral may converge only conditionally
    (``alpha < decay_power <= alpha + 1``): the leading power ``C |v|^(alpha-p)``
    of the integrand is subtracted and its transform added in closed form.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    _check_integrable(pair, alpha, conditional)
    F = pair.freq
    if F.support is not None:
        val = complex(_riesz_compact(pair, alpha, [t])[0])
        return val.real if F.even else val
    t = float(t)
    G, H = _parts(F)
    p = F.decay_power
    val = _transform_half(G, alpha, t, "cos", p)
    if not F.even:
        val += 1j * _transform_half(H, alpha, t, "sin", p)
    val /= SQRT_2PI
    return val.real if F.even else val


# ---------------------------------------------------------------------------
# materialization

def _panel_edges(breakpoints, radius, compact_support=None, singular=False):
    """Interpolation panels on ``[-radius, radius]``.

    Kinks of the derivative sit on panel edges; a singularity at 0 (slowly
    decaying spectrum) gets geometric grading with ratio 4 down to 1e-10.
    """
    if compact_support is not None:
        width = min(1.0, 6.0 / compact_support)
        n = int(math.ceil(radius / width))
        return np.linspace(-n * width, n * width, 2 * n + 1)
    edges = {0.0}
    edges.update(b for b in breakpoints if abs(b) < radius)
    if singular:
        k = np.arange(1, int(math.ceil(math.log(1 / GRADING_FLOOR, 4))) + 1)
        edges.update((0.25 ** k).tolist())
        edges.update((-(0.25 ** k)).tolist())
    edges.update(np.arange(-8.0, 9.0).tolist())
    far = 8.0 * 2.0 ** np.arange(1, int(math.log2(radius / 8.0)) + 1)
    edges.update(far.tolist())
    edges.update((-far).tolist())
    e = np.array(sorted(edges))
    return e[(e >= -radius) & (e <= radius)]


class _Chebyshev:
    """Piecewise Chebyshev interpolant on the panels ``edges``.

    With ``even`` only the panels in ``[0, inf)`` are built and negative
    arguments are reflected.
    """

    def __init__(self, fn, edges, degree=CHEB_DEGREE, even=False):
        edges = np.asarray(edges, dtype=float)
        self.even = even
        if even:
            edges = edges[edges >= 0]
        self.edges = edges
        n = degree + 1
        x = np.cos(math.pi * (np.arange(n) + 0.5) / n)
        a, b = edges[:-1], edges[1:]
        nodes = 0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * x[None, :]
        vals = np.asarray(fn(nodes.ravel())).reshape(nodes.shape)
        c = dct(vals, type=2, axis=1) / n
        c[:, 0] *= 0.5
        self.coef = c

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.even:
            t = np.abs(t)
        i = np.clip(np.searchsorted(self.edges, t, side="right") - 1, 0, len(self.edges) - 2)
        a, b = self.edges[i], self.edges[i + 1]
        x = (2 * t - a - b) / (b - a)
        c = self.coef[i]
        # Clenshaw
        b1 = np.zeros_like(x, dtype=c.dtype)
        b2 = np.zeros_like(b1)
        for k in range(c.shape[1] - 1, 0, -1):
            b1, b2 = 2 * x * b1 - b2 + c[..., k], b1
        return x * b1 - b2 + c[..., 0]


def _far_coefficient(pair, alpha):
    """``A`` in ``D^alpha f(t) ~ A |t|^(-1-alpha)``, from the kink of ``|v|^alpha`` at 0."""
    F0 = complex(pair.freq(np.array([0.0]))[0])
    return math.sqrt(2 / math.pi) * gamma(alpha + 1) * math.cos(math.pi * (alpha + 1) / 2) * F0.real


def riesz_function(pair, alpha, radius=FAR_RADIUS):
    """The Riesz derivative materialized as a :class:`RealFunction`.

    Raises RieszUnavailable unless ``|v|^alpha fhat`` tends to 0 at infinity
    (decay power above alpha) or the spectrum is compactly supported.
    """
    F = pair.freq
    try:
        _check_integrable(pair, alpha, conditional=True)
    except NotL1 as exc:
        raise RieszUnavailable(str(exc)) from None
    name = f"D^{alpha:g} {pair.name}"
    if F.support is not None:
        S = float(F.support)
        if S == 0:
            return RealFunction(name, lambda x: np.zeros_like(np.asarray(x, dtype=float)),
                                DecayHint.compact(0.0), exact_integral=0.0)
        edges = _panel_edges((), 64.0, compact_support=S)

        def point(t):
            v = _riesz_compact(pair, alpha, t)
            return v.real if F.even else v
        cheb = _Chebyshev(point, edges, even=F.even)
        R = float(edges[-1])
        # t^-2 envelope fitted to the last panel pair: an estimate, not a proof
        probe = np.linspace(0.75 * R, R, 33)
        const = 2.0 * float(np.max(np.abs(cheb(probe)) * probe ** 2)) + 1e-300

        def evaluator(x):
            x = np.asarray(x, dtype=float)
            inside = np.abs(x) <= R
            out = np.zeros(x.shape, dtype=cheb.coef.dtype)
            out[inside] = cheb(x[inside])
            return out
        return RealFunction(name, evaluator, DecayHint.polynomial(2.0, const, R),
                            breakpoints=tuple(edges.tolist()))

    cond = F.decay_power <= alpha + 1

    def point(ts):
        return np.array([riesz_fourier(pair, alpha, float(s), conditional=cond) for s in ts])

    edges = _panel_edges(pair.time.breakpoints, radius, singular=cond)
    cheb = _Chebyshev(point, edges, even=F.even)
    A = _far_coefficient(pair, alpha)
    R = float(edges[-1])

    def evaluator(x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) <= R
        out = np.zeros(x.shape, dtype=cheb.coef.dtype)
        out[inside] = cheb(x[inside])
        with np.errstate(divide="ignore"):
            out[~inside] = A * np.abs(x[~inside]) ** (-1.0 - alpha)
        return out

    decay = DecayHint.polynomial(1.0 + alpha, 2.0 * abs(A) + 1e-300, R)
    return RealFunction(name, evaluator, decay, breakpoints=tuple(edges.tolist()))


# ---------------------------------------------------------------------------
# difference-quotient route

def _hypersingular(f, alpha, j, eps, t, U, abstol):
    edges = [eps, U] + list(np.geomspace(eps, U, 12))
    for b in f.breakpoints:
        for k in range(2 * j + 1):
            if k != j:
                u = (b - t) / (j - k)
                if eps < u < U:
                    edges.append(u)

    def integrand(u):
        return central_difference(f, j, u, np.full_like(u, t)) / u ** (1.0 + alpha)

    # rounding in the 2j-th difference, amplified by u^-(1+alpha), sets the noise floor
    val, _ = integrate(integrand, edges, abstol=abstol, reltol=1e-13)
    # beyond U only the k = j term survives: (-1)^j C(2j, j) f(t)
    tail = (-1) ** j * comb(2 * j, j, exact=True) * float(f(np.array([t]))[0]) * U ** (-alpha) / alpha
    return val + tail


def riesz_difference(f, spec, t, tol=1e-6):
    """``(1/C) integral_eps^inf Delta-bar_u^{2j} f(t) / u^(1+alpha) du``, the cut-off difference quotient."""
    if isinstance(f, FunctionPair):
        f = f.time
    alpha, j = spec.alpha, spec.order
    if not alpha < 2 * j:
        raise DomainError(f"need alpha < 2j, got alpha={alpha}, j={j}")
    if spec.domain_radius is not None:
        R = spec.domain_radius
    elif f.decay is not None:
        R = f.decay.radius_for(1e-14)
    else:
        raise DecayHintMissing(f"{f.name}: no decay hint and no domain radius")
    t = float(t)
    U = R + abs(t) + 2 * j
    C = c_alpha_2j(alpha, j)
    abstol = 0.01 * tol * abs(C)
    coarse = _hypersingular(f, alpha, j, spec.epsilon, t, U, abstol) / C
    fine = _hypersingular(f, alpha, j, 0.5 * spec.epsilon, t, U, abstol) / C
    if abs(coarse - fine) > 10 * tol:
        raise NoConvergence(f"halving epsilon moved the result by {abs(coarse - fine):.3g}")
    return fine
