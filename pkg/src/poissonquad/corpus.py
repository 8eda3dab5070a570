"""Function model and the built-in test functions.

A :class:`FunctionPair` couples an integrand on the real line with its
Fourier transform ``fhat(v) = (2 pi)^(-1/2) * integral f(u) exp(-i u v) du``.
Evaluators are vectorized: they take and return numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable, Mapping, Optional

import numpy as np
from scipy.special import gammaincc, gamma

from ._integrate import integrate
from .errors import DecayHintMissing, DomainError, NonIntegrableDecay

SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class DecayHint:
    """Envelope ``|f(x)| <= constant * |x|**power * exp(-rate*|x|)`` for ``|x| >= radius``.

    For ``kind == "polynomial"`` the envelope is ``constant * |x|**(-power)``;
    for ``kind == "compact"`` the function vanishes for ``|x| >= radius``.
    The envelope is required to be nonincreasing beyond ``radius``.
    """

    kind: str
    rate: float = 0.0
    power: float = 0.0
    radius: float = 0.0
    constant: float = 1.0

    @classmethod
    def exponential(cls, rate, constant=1.0, power=0.0, radius=0.0):
        # x**p e^{-r x} only decreases beyond p/r.
        return cls("exponential", rate=rate, power=power,
                   radius=max(radius, power / rate), constant=constant)

    @classmethod
    def polynomial(cls, power, constant=1.0, radius=0.0):
        return cls("polynomial", power=power, radius=radius, constant=constant)

    @classmethod
    def compact(cls, radius):
        return cls("compact", radius=radius, constant=0.0)

    def envelope(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        if self.kind == "compact":
            return np.zeros_like(x)
        if self.kind == "polynomial":
            with np.errstate(divide="ignore"):
                return self.constant * x ** (-self.power)
        return self.constant * x ** self.power * np.exp(-self.rate * x)

    def tail_integral(self, a):
        """Upper bound for ``integral_a^inf |f(x)| dx`` (one side), ``a >= radius``."""
        a = float(a)
        if self.kind == "compact":
            return 0.0 if a >= self.radius else math.inf
        if self.kind == "polynomial":
            if self.power <= 1:
                return math.inf
            return self.constant * a ** (1.0 - self.power) / (self.power - 1.0)
        p, r = self.power, self.rate
        if p == 0:
            return self.constant * math.exp(-r * a) / r
        # integral_a^inf x^p e^{-rx} dx = Gamma(p+1, r a) / r^(p+1)
        return self.constant * gammaincc(p + 1, r * a) * gamma(p + 1) / r ** (p + 1)

    def radius_for(self, tol):
        """Smallest radius (searched geometrically) with both tails below ``tol``."""
        if self.kind == "compact":
            return self.radius
        if self.kind == "polynomial":
            if self.power <= 1:
                raise NonIntegrableDecay(f"polynomial decay of power {self.power} is not integrable")
            r = (self.constant / tol) ** (1.0 / (self.power - 1.0))
        else:
            r = math.log(max(self.constant, 1.0) / tol) / self.rate + 5.0
        r = max(r, self.radius, 1.0)
        while 2 * self.tail_integral(r) > tol:
            r *= 1.25
        return r

    def shifted(self, tau):
        """Envelope for ``f(x + tau)``."""
        t = abs(tau)
        if self.kind == "compact" or t == 0:
            return replace(self, radius=self.radius + t)
        if self.kind == "polynomial":
            return replace(self, constant=self.constant * 2 ** self.power,
                           radius=max(self.radius + t, 2 * t))
        return replace(self, constant=self.constant * math.exp(self.rate * t) * 2 ** self.power,
                       radius=max(self.radius + t, t, self.power / self.rate))


@dataclass(frozen=True, eq=False)
class RealFunction:
    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    decay: Optional[DecayHint] = None
    exact_integral: Optional[float] = None
    breakpoints: tuple = ()
    derivatives: Mapping[int, "RealFunction"] = field(default_factory=dict)

    def __call__(self, x):
        return self.evaluator(np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    """Fourier transform of a :class:`RealFunction`.

    ``decay_power``/``decay_constant`` record ``|fhat(v)| <= C |v|**(-p)`` for
    all ``v != 0``; ``exp_envelope = (C, r)`` optionally records
    ``|fhat(v)| <= C exp(-r |v|)``.  ``kinks(lo, hi)`` lists points in ``[lo, hi]`` where the
    spectrum is not smooth; ``support`` is set when ``fhat`` vanishes for
    ``|v| >= support``.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    kind: str = "analytic"
    tolerance: float = 0.0
    decay_power: Optional[float] = None
    decay_constant: Optional[float] = None
    even: bool = False
    smooth: bool = True
    support: Optional[float] = None
    exp_envelope: Optional[tuple] = None
    kinks: Optional[Callable[[float, float], np.ndarray]] = None

    def __call__(self, v):
        return self.evaluator(np.asarray(v, dtype=float))

    def kink_points(self, lo, hi):
        if self.kinks is None:
            return np.empty(0)
        return np.asarray(self.kinks(lo, hi), dtype=float)


@dataclass(frozen=True, eq=False)
class FunctionPair:
    time: RealFunction
    freq: SpectralFunction

    @property
    def name(self):
        return self.time.name


def numeric_fourier(f, v, tol=1e-10):
    """Fourier transform of ``f`` at the single frequency ``v`` by adaptive quadrature.

    The integration range is chosen from the decay hint so that the discarded
    tails are below ``tol``; for ``|v| > 1`` panels are at most half a period
    of ``exp(-i u v)`` long.
    """
    if f.decay is None:
        raise NonIntegrableDecay(f"{f.name}: no decay hint, cannot truncate the Fourier integral")
    if tol <= 0:
        raise DomainError("tol must be positive")
    radius = f.decay.radius_for(tol)
    v = float(v)
    edges = [-radius, radius] + [b for b in f.breakpoints if -radius < b < radius]
    if abs(v) > 1.0:
        step = math.pi / abs(v)
        n = int(math.ceil(2 * radius / step))
        edges.extend(np.linspace(-radius, radius, n + 1))
    else:
        edges.extend(np.linspace(-radius, radius, int(2 * radius) + 1))

    def integrand(u):
        return f(u) * np.exp(-1j * u * v)

    value, _ = integrate(integrand, edges, abstol=0.1 * tol * SQRT_2PI, reltol=1e-14)
    return complex(value) / SQRT_2PI


def translate(pair, tau):
    """The pair of ``f(tau + .)``; its transform is ``fhat(v) exp(i tau v)``."""
    tau = float(tau)
    if tau == 0.0:
        return pair
    f, F = pair.time, pair.freq
    time = RealFunction(
        name=f"{f.name}@{tau:g}",
        evaluator=lambda x: f.evaluator(x + tau),
        decay=None if f.decay is None else f.decay.shifted(tau),
        exact_integral=f.exact_integral,
        breakpoints=tuple(b - tau for b in f.breakpoints),
        derivatives={k: translate(FunctionPair(d, F), tau).time for k, d in f.derivatives.items()},
    )
    freq = replace(
        F,
        evaluator=lambda v: F.evaluator(v) * np.exp(1j * tau * v),
        even=False,
        smooth=False,
    )
    return FunctionPair(time, freq)


def _reflect(pair, sign):
    f, F = pair.time, pair.freq
    label = "even" if sign > 0 else "odd"
    bps = sorted(set(f.breakpoints) | {-b for b in f.breakpoints})
    time = RealFunction(
        name=f"{label}({f.name})",
        evaluator=lambda x: 0.5 * (f.evaluator(x) + sign * f.evaluator(-x)),
        decay=f.decay,
        exact_integral=None if f.exact_integral is None else (f.exact_integral if sign > 0 else 0.0),
        breakpoints=tuple(bps),
    )

    def spectrum(v):
        return 0.5 * (np.asarray(F.evaluator(v), dtype=complex) + sign * F.evaluator(-v))

    kinks = None
    if F.kinks is not None:
        def kinks(lo, hi):
            pts = np.concatenate([F.kinks(lo, hi), -F.kinks(-hi, -lo)])
            return np.unique(pts)
    freq = replace(F, evaluator=spectrum, even=sign > 0 and F.even, kinks=kinks)
    return FunctionPair(time, freq)


def even_part(pair):
    return _reflect(pair, +1)


def odd_part(pair):
    return _reflect(pair, -1)


# ---------------------------------------------------------------------------
# built-in corpus

def _f1(x):
    return np.exp(-np.abs(x))


def _f1_d1(x):
    return -np.sign(x) * np.exp(-np.abs(x))


def _f1_hat(v):
    return math.sqrt(2.0) / (math.sqrt(math.pi) * (1.0 + v * v)) + 0j


def _f2(x):
    return x * x * np.exp(-np.abs(x))


def _f2_d1(x):
    ax = np.abs(x)
    return np.sign(x) * (2 * ax - ax * ax) * np.exp(-ax)


def _f2_d2(x):
    ax = np.abs(x)
    return (2 - 4 * ax + ax * ax) * np.exp(-ax)


def _f2_hat(v):
    return 2 * math.sqrt(2.0) * (1 - 3 * v * v) / (math.sqrt(math.pi) * (1 + v * v) ** 3) + 0j


def _f3(x):
    return 1.0 / (1.0 + x ** 6)


def _gauss(x):
    return np.exp(-x * x)


def _gauss_d2(x):
    return (4 * x * x - 2) * np.exp(-x * x)


def _gauss_hat(v):
    return np.exp(-v * v / 4) / math.sqrt(2.0) + 0j


def _hat(x):
    return np.maximum(0.0, 1.0 - np.abs(x))


def _fejer_hat(v):
    return np.maximum(0.0, 1.0 - np.abs(v)) + 0j


def _fejer(x):
    # inverse transform of the unit triangle: (2 pi)^(-1/2) (sin(x/2)/(x/2))^2
    return np.sinc(x / (2 * math.pi)) ** 2 / SQRT_2PI


def _sinc2_hat(v):
    return np.sinc(v / (2 * math.pi)) ** 2 / SQRT_2PI + 0j


@lru_cache(maxsize=4096)
def _f3_hat_scalar(v):
    # |f3hat(v)| <= sqrt(pi/2) e^{-|v|/2}: below the tabulation tolerance past v ~ 75
    if math.sqrt(math.pi / 2) * math.exp(-0.5 * v) < 1e-17:
        return 0.0
    return numeric_fourier(_F3_TIME, v, tol=1e-12).real


def _f3_hat(v):
    v = np.asarray(v, dtype=float)
    flat = [_f3_hat_scalar(float(abs(x))) for x in v.ravel()]
    return np.asarray(flat, dtype=complex).reshape(v.shape)


_F2_D2 = RealFunction("f2''", _f2_d2, DecayHint.exponential(1.0, power=2.0, constant=1.0, radius=6.0),
                      breakpoints=(0.0,))
_F2_D1 = RealFunction("f2'", _f2_d1, DecayHint.exponential(1.0, power=2.0, constant=1.0, radius=3.0),
                      breakpoints=(0.0,), derivatives={1: _F2_D2})
_F3_TIME = RealFunction("f3", _f3, DecayHint.polynomial(6.0), exact_integral=2 * math.pi / 3)


def _zero(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def _build():
    f1 = FunctionPair(
        RealFunction("f1", _f1, DecayHint.exponential(1.0), exact_integral=2.0, breakpoints=(0.0,),
                     derivatives={1: RealFunction("f1'", _f1_d1, DecayHint.exponential(1.0),
                                                  breakpoints=(0.0,))}),
        SpectralFunction(_f1_hat, decay_power=2.0, decay_constant=math.sqrt(2 / math.pi), even=True),
    )
    f2 = FunctionPair(
        RealFunction("f2", _f2, DecayHint.exponential(1.0, power=2.0), exact_integral=4.0,
                     breakpoints=(0.0,), derivatives={1: _F2_D1, 2: _F2_D2}),
        # |1 - 3v^2| <= 3v^2 for |v| >= 1 and <= 2 <= 3 v^-4 below, so C = 6 sqrt(2/pi)
        SpectralFunction(_f2_hat, decay_power=4.0, decay_constant=6 * math.sqrt(2 / math.pi), even=True),
    )
    f3 = FunctionPair(
        _F3_TIME,
        # residues give |fhat3(v)| <= sqrt(pi/2) e^{-|v|/2} <= sqrt(pi/2) (12/e)^6 |v|^-6
        SpectralFunction(_f3_hat, kind="numeric", tolerance=1e-12, decay_power=6.0,
                         decay_constant=math.sqrt(math.pi / 2) * (12 / math.e) ** 6, even=True,
                         exp_envelope=(math.sqrt(math.pi / 2), 0.5)),
    )
    gaussian = FunctionPair(
        RealFunction("gaussian", _gauss, DecayHint.exponential(1.0, radius=1.0),
                     exact_integral=math.sqrt(math.pi), derivatives={2: RealFunction("gaussian''", _gauss_d2,
                                                                                     DecayHint.exponential(1.0, power=2.0, constant=4.0, radius=2.0))}),
        # e^{-v^2/4} <= (2p/e)^{p/2} v^{-p} with p = 8
        SpectralFunction(_gauss_hat, decay_power=8.0, decay_constant=(16 / math.e) ** 4 / math.sqrt(2.0), even=True),
    )
    hat = FunctionPair(
        RealFunction("hat", _hat, DecayHint.compact(1.0), exact_integral=1.0, breakpoints=(-1.0, 0.0, 1.0)),
        SpectralFunction(_sinc2_hat, decay_power=2.0, decay_constant=4 / SQRT_2PI, even=True),
    )
    fejer = FunctionPair(
        RealFunction("fejer", _fejer, DecayHint.polynomial(2.0, constant=4 / SQRT_2PI, radius=1.0),
                     exact_integral=SQRT_2PI),
        SpectralFunction(_fejer_hat, decay_power=0.0, decay_constant=1.0, even=True, smooth=False,
                         support=1.0, kinks=lambda lo, hi: np.array([p for p in (-1.0, 0.0, 1.0) if lo <= p <= hi])),
    )
    zero = FunctionPair(
        RealFunction("zero", _zero, DecayHint.compact(0.0), exact_integral=0.0,
                     derivatives={k: RealFunction("zero", _zero, DecayHint.compact(0.0), exact_integral=0.0)
                                  for k in range(1, 5)}),
        SpectralFunction(lambda v: np.zeros_like(v, dtype=complex), decay_power=math.inf,
                         decay_constant=0.0, even=True, support=0.0),
    )
    return {p.name: p for p in (f1, f2, f3, gaussian, hat, fejer, zero)}


_REGISTRY = _build()


def builtin_corpus():
    """The three test integrands of the numerical examples: f1, f2, f3."""
    return [_REGISTRY[n] for n in ("f1", "f2", "f3")]


def get_pair(name):
    try:
        return _REGISTRY[name]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; known: {', '.join(sorted(_REGISTRY))}") from None


def available():
    return sorted(_REGISTRY)


def register(pair):
    """Add a pair to the registry so the command line can address it by name."""
    _REGISTRY[pair.name] = pair
    return pair
