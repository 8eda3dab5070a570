"""Distance from the Bernstein space: ``sup_{|v| >= sigma} |v|^w |fhat(v)|``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError, UnboundedWeight


@dataclass(frozen=True)
class DistanceQuery:
    """``weight_exponent`` is 0 for the function itself, s or alpha for its derivatives."""

    weight_exponent: float = 0.0
    sigma: float = 1.0
    n_grid: int = 4096
    v_max: Optional[float] = None

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("sigma must be positive")
        if self.weight_exponent < 0:
            raise DomainError("weight_exponent must be nonnegative")
        if self.v_max is not None and not self.v_max > self.sigma:
            raise DomainError("v_max must exceed sigma")

    @property
    def upper(self):
        return self.v_max if self.v_max is not None else 1e4 * self.sigma


@dataclass(frozen=True)
class DistanceEstimate:
    value: float
    argmax: float
    tail_slack: float

    def __float__(self):
        return float(self.value)


def _weighted(fhat, w, v, even):
    v = np.asarray(v, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.abs(v) ** w * np.abs(np.asarray(fhat(v)))
        if not even:
            out = np.maximum(out, np.abs(v) ** w * np.abs(np.asarray(fhat(-v))))
    return np.nan_to_num(out, nan=0.0)


def _scan(fhat, w, grid, chunk=64):
    """Weighted values on the grid; with an exponential envelope the scan stops once
    the envelope of the remaining points falls below the running maximum."""
    if fhat.exp_envelope is None:
        return _weighted(fhat, w, grid, fhat.even)
    C, r = fhat.exp_envelope
    with np.errstate(over="ignore"):
        env = C * np.exp(-r * grid) * grid ** w
    vals = np.zeros_like(grid)
    best = -np.inf
    for start in range(0, grid.size, chunk):
        if start > 0 and np.max(env[start:]) < best:
            break
        part = _weighted(fhat, w, grid[start:start + chunk], fhat.even)
        vals[start:start + chunk] = part
        best = max(best, float(np.max(part)))
    return vals


def dist_bernstein(fhat, q: DistanceQuery) -> DistanceEstimate:
    """Grid estimate of the distance functional with one refinement around the argmax.

    The returned value is a lower estimate; ``tail_slack`` bounds what lies
    beyond the grid (from the spectral decay power).
    """
    w, sigma = float(q.weight_exponent), float(q.sigma)
    p = fhat.decay_power
    if fhat.support is not None and fhat.support <= sigma:
        return DistanceEstimate(0.0, sigma, 0.0)
    if p is not None and p < w:
        raise UnboundedWeight(f"|v|^{w} fhat(v) is unbounded: decay power {p} < {w}")
    hi = q.upper
    slack = 0.0
    if fhat.support is not None:
        hi = min(hi, fhat.support)
    elif p is None or fhat.decay_constant is None:
        slack = math.inf
    else:
        slack = fhat.decay_constant * hi ** (w - p) if fhat.decay_constant else 0.0
    grid = np.geomspace(sigma, hi, q.n_grid)
    kinks = fhat.kink_points(sigma, hi)
    grid = np.unique(np.concatenate([grid, kinks[(kinks >= sigma) & (kinks <= hi)]]))
    vals = _scan(fhat, w, grid)
    i = int(np.argmax(vals))
    best, arg = float(vals[i]), float(grid[i])
    lo, up = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    if up > lo:
        fine = np.linspace(lo, up, 257)
        fv = _weighted(fhat, w, fine, fhat.even)
        k = int(np.argmax(fv))
        if fv[k] > best:
            best, arg = float(fv[k]), float(fine[k])
        # polish an interior maximum; kinks and the endpoint sigma are already on the grid
        a, b = fine[max(k - 1, 0)], fine[min(k + 1, fine.size - 1)]
        res = minimize_scalar(lambda x: -float(_weighted(fhat, w, np.array([x]), fhat.even)[0]),
                              bounds=(a, b), method="bounded", options={"xatol": 1e-13 * max(1.0, b)})
        if -res.fun > best:
            best, arg = float(-res.fun), float(res.x)
    return DistanceEstimate(best, arg, slack)
