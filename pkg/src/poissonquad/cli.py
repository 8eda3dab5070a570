"""Command line front end: tables, remainders, bounds, sweeps and order fits.

Exit codes: 0 on success, 2 for usage errors (argparse), 3 when a
precondition fails, 4 when a computation fails numerically.
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence

import numpy as np

from . import bounds as _bounds
from ._integrate import loglog_slope
from .corpus import get_pair
from .distance import DistanceQuery, dist_bernstein
from .errors import DegenerateFit, DomainError, NumericalError, PreconditionError
from .extremal import ExtremalFunction, sharpness_check, verify_properties
from .fractional import RieszSpec, riesz_difference, riesz_fourier
from .moebius import parseval_check, recover_spectrum, remainder_sequence, translation_sweep
from .quadrature import remainder_exact, trapezoidal_sum
from .smoothness import modulus_profile
from .spectral import remainder_spectral

EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4
FP_FLOOR = 1e-13
BELOW_FLOOR = "below fp floor"

_H_ROWS = (2.0, 1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.08, 0.06, 0.04, 0.02, 0.01, 0.008, 0.006, 0.004, 0.002, 0.001)


@dataclass(frozen=True)
class TableSpec:
    fn: str
    hs: tuple
    N_factor: float = 100.0
    p: Optional[float] = None
    mark_floor: bool = False

    def __post_init__(self):
        if any(h <= 0 for h in self.hs):
            raise DomainError("h values must be positive")
        if any(a <= b for a, b in zip(self.hs, self.hs[1:])):
            raise DomainError("h values must be strictly descending")

    def N(self, h):
        return int(math.ceil(self.N_factor / h))


TABLES = {
    1: TableSpec("f1", _H_ROWS, 100.0, 2.0),
    2: TableSpec("f2", _H_ROWS, 100.0, 4.0),
    3: TableSpec("f3", (2.0, 1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.08, 0.06), 1e4, None, mark_floor=True),
}


@dataclass
class RunConfig:
    tol: float = 1e-10
    riesz_tol: float = 1e-6
    K: Optional[int] = None
    N: Optional[int] = None
    J_max: int = 512
    grid_n: int = 16
    out: Optional[str] = None
    deterministic: bool = True

    def __post_init__(self):
        for name in ("tol", "riesz_tol"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")

    @classmethod
    def from_file(cls, path):
        parser = configparser.ConfigParser()
        parser.optionxform = str
        with open(path) as fh:
            parser.read_string("[run]\n" + fh.read())
        # keys match field names case-insensitively (k = K)
        known = {f.name.lower(): f.name for f in fields(cls)}
        kwargs = {}
        for key, raw in parser["run"].items():
            name = known.get(key.lower())
            if name is None:
                raise DomainError(f"unknown config key {key!r}")
            kwargs[name] = _coerce(name, raw)
        return cls(**kwargs)


def _coerce(key, raw):
    raw = raw.strip()
    if raw.lower() in ("none", ""):
        return None
    if key in ("K", "N", "J_max", "grid_n"):
        return int(raw)
    if key in ("tol", "riesz_tol"):
        return float(raw)
    if key == "deterministic":
        if raw.lower() not in ("1", "true", "yes", "on"):
            raise DomainError("runs are always deterministic")
        return True
    return raw


def parse_grid(text, descending=False):
    """``lo:hi[:log|log10|lin[:n]]``; ``log10`` takes n points per decade, the others n in total."""
    parts = text.split(":")
    if len(parts) < 2 or len(parts) > 4:
        raise DomainError(f"bad grid {text!r}; expected lo:hi[:log|log10|lin[:n]]")
    lo, hi = float(parts[0]), float(parts[1])
    mode = parts[2] if len(parts) > 2 else "log"
    if not (0 < lo < hi) and mode != "lin":
        raise DomainError("log grids need 0 < lo < hi")
    if mode == "log":
        n = int(parts[3]) if len(parts) > 3 else 10
        g = np.geomspace(lo, hi, n)
    elif mode == "log10":
        per = int(parts[3]) if len(parts) > 3 else 5
        g = np.geomspace(lo, hi, max(2, int(round(per * math.log10(hi / lo))) + 1))
    elif mode == "lin":
        n = int(parts[3]) if len(parts) > 3 else 10
        g = np.linspace(lo, hi, n)
    else:
        raise DomainError(f"unknown grid mode {mode!r}")
    g = [float(x) for x in g]
    return g[::-1] if descending else g


# ---------------------------------------------------------------------------
# operations shared with the tests

def table(spec: TableSpec):
    """Rows ``(h, S, E, E_norm)``; rows below the fp floor carry a marker when ``mark_floor`` is set."""
    f = get_pair(spec.fn).time
    rows = []
    for h in spec.hs:
        res = trapezoidal_sum(f, h, spec.N(h))
        row = dict(h=h, S=res.S, E=res.error, E_norm=res.normalized_error(spec.p))
        if spec.mark_floor and res.error < FP_FLOOR:
            row["note"] = BELOW_FLOOR
        rows.append(row)
    return rows


def order_fit(fn, hs: Sequence[float], min_decades=1.5, floor=1e-12):
    """Log-log least-squares slope of the quadrature error against h."""
    hs = np.asarray(sorted(hs), dtype=float)
    if hs.size < 5:
        raise DomainError("order_fit needs at least 5 h values")
    if math.log10(hs[-1] / hs[0]) < min_decades - 1e-12:
        raise DomainError(f"h values must span {min_decades} decades")
    f = get_pair(fn).time
    E = np.array([trapezoidal_sum(f, h).error for h in hs])
    if np.any(E <= floor):
        raise DegenerateFit(f"errors reach the floating-point floor ({E.min():.1e})")
    return loglog_slope(hs, E)


def _default_alpha(fn):
    return 1.25 if fn == "f1" else 2.0


def bounds_rows(fn, hs, kinds, alpha=None, s=2, r=2, K=200):
    pair = get_pair(fn)
    alpha = _default_alpha(fn) if alpha is None else alpha
    kinds = _bounds.KINDS if kinds == "all" else tuple(kinds.split(","))
    for k in kinds:
        if k not in _bounds.KINDS:
            raise DomainError(f"unknown bound kind {k!r}")
    rows = []
    for h in hs:
        R = abs(remainder_exact(pair, h))
        row = {"h": h, "R": R}
        for kind in kinds:
            try:
                b = _one_bound(pair, kind, h, alpha, s, r, K)
            except PreconditionError:
                b = None  # not applicable to this function
            row[kind] = b
            row[f"{kind}_ratio"] = None if b is None or R == 0 else b / R
        rows.append(row)
    return rows


def _one_bound(pair, kind, h, alpha, s, r, K):
    if kind == "modulus_series":
        return _bounds.bound_modulus_series(pair, r, 2 * math.pi / h, K).value
    if kind in ("sobolev_norm", "sobolev_modulus"):
        return _bounds.bound_sobolev(pair, s, r, h, use_norm=kind == "sobolev_norm").value
    if kind in ("fractional_norm", "fractional_modulus"):
        return _bounds.bound_fractional(pair, alpha, r, h, use_norm=kind == "fractional_norm").value
    if kind == "distance_integer":
        if s not in pair.time.derivatives:
            raise PreconditionError("integer order needs a registered derivative")
        return _bounds.bound_distance(pair, s, h, integer_mode=True).value
    return _bounds.bound_distance(pair, alpha, h).value


# ---------------------------------------------------------------------------
# subcommands; each returns a list of row dicts

def cmd_quad(a, cfg):
    f = get_pair(a.fn).time
    res = trapezoidal_sum(f, a.h, a.n if a.n is not None else cfg.N)
    p = a.p if a.p is not None else {"f1": 2.0, "f2": 4.0}.get(a.fn)
    return [dict(h=res.h, S=res.S, E=res.error, E_norm=res.normalized_error(p))]


def cmd_remainder(a, cfg):
    pair = get_pair(a.fn)
    row = {"h": a.h}
    if a.side in ("time", "both"):
        row["exact"] = remainder_exact(pair, a.h, cfg.N)
    if a.side in ("spectral", "both"):
        sr = remainder_spectral(pair.freq, 2 * math.pi / a.h, cfg.K)
        row["spectral"] = sr.value.real
        row["spectral_imag"] = sr.value.imag
        row["tail_bound"] = sr.tail_bound
    if a.side == "both":
        row["difference"] = abs(row["exact"] - row["spectral"])
    return [row]


def cmd_modulus(a, cfg):
    f = get_pair(a.fn).time
    prof = modulus_profile(f, a.r, parse_grid(a.deltas), cfg.grid_n, cfg.tol)
    return [dict(delta=d, omega=w) for d, w in zip(prof.deltas, prof.values)]


def cmd_bounds(a, cfg):
    return bounds_rows(a.fn, parse_grid(a.h_grid, descending=True), a.kinds, a.alpha, a.s, a.r)


def cmd_riesz(a, cfg):
    pair = get_pair(a.fn)
    alpha = a.alpha
    rows = []
    for t in (float(x) for x in a.t.split(",")):
        row = {"t": t}
        if a.method in ("fourier", "both"):
            v = riesz_fourier(pair, alpha, t, conditional=True)
            row["fourier"] = complex(v).real
        if a.method in ("difference", "both"):
            row["difference"] = riesz_difference(pair.time, RieszSpec(alpha), t, cfg.riesz_tol)
        if a.method == "both":
            row["deviation"] = abs(row["fourier"] - row["difference"])
        rows.append(row)
    return rows


def cmd_dist(a, cfg):
    F = get_pair(a.fn).freq
    rows = []
    for s in parse_grid(a.sigma_grid):
        d = dist_bernstein(F, DistanceQuery(a.alpha, s))
        rows.append(dict(sigma=s, dist=d.value, argmax=d.argmax, tail_slack=d.tail_slack))
    return rows


def cmd_mobius(a, cfg):
    pair = get_pair(a.fn)
    rec = recover_spectrum(remainder_sequence(pair, a.sigma, a.k, a.source))
    analytic = complex(pair.freq(np.array([a.sigma]))[0]).real
    return [dict(sigma=a.sigma, K=rec.K, recovered=rec.value, tail_estimate=rec.tail_estimate,
                 analytic=analytic, deviation=abs(rec.value - analytic))]


def cmd_sweep(a, cfg):
    pair = get_pair(a.fn)
    if a.parseval:
        pc = parseval_check(pair, a.sigma, a.ntau)
        return [dict(sigma=a.sigma, ntau=pc.ntau, K=pc.K, mean_square=pc.mean_square,
                     spectral_sum=pc.spectral_sum, deviation=pc.deviation)]
    period = 2 * math.pi / a.sigma
    taus = [-0.5 * period + period * i / a.ntau for i in range(a.ntau)]
    R = translation_sweep(pair, a.sigma, taus, cfg.K)
    return [dict(tau=t, R_real=r.real, R_imag=r.imag) for t, r in zip(taus, R)]


def cmd_extremal(a, cfg):
    e = ExtremalFunction(a.alpha, cfg.J_max)
    rows = []
    if a.check in ("properties", "all"):
        for c in verify_properties(e):
            rows.append(asdict(c))
    if a.check in ("sharpness", "all"):
        rep = sharpness_check(e, a.sigma)
        rows.append(dict(name=f"sharpness sigma={a.sigma:g}", passed=abs(rep.ratio - 1) <= 1e-6,
                         measured=rep.lhs, expected=rep.rhs, deviation=abs(rep.ratio - 1)))
    return rows


def cmd_table(a, cfg):
    spec = TABLES[a.table]
    if a.fn is not None and a.fn != spec.fn:
        spec = TableSpec(a.fn, spec.hs, spec.N_factor, spec.p, spec.mark_floor)
    return table(spec)


def cmd_order(a, cfg):
    hs = parse_grid(a.h_range)
    return [dict(fn=a.fn, h_min=min(hs), h_max=max(hs), n=len(hs),
                 slope=order_fit(a.fn, hs, min_decades=a.min_decades))]


# ---------------------------------------------------------------------------
# output

def _cell(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _json_default(x):
    if isinstance(x, np.generic):
        return x.item()
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _table_csv(rows):
    # fixed header h,S,E,E_norm; Table 3 has no normalization, so the marker takes that cell
    out = []
    for r in rows:
        norm = r.get("note") if r.get("note") else r["E_norm"]
        out.append(dict(h=r["h"], S=r["S"], E=r["E"], E_norm=norm))
    return out


def render(rows, fmt):
    if fmt == "json":
        return json.dumps(rows, indent=2, default=_json_default, allow_nan=True) + "\n"
    header = []
    for r in rows:
        header.extend(k for k in r if k not in header)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(r.get(k)) for k in header])
        return buf.getvalue()
    cells = [[_pretty(r.get(k)) for k in header] for r in rows]
    widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _pretty(x):
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".10g")
    return _cell(x)


def read_csv(text):
    """Parse CSV written by :func:`render` back into floats where possible."""
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {}
        for k, v in rec.items():
            if v == "":
                row[k] = None
                continue
            try:
                row[k] = float(v)
            except ValueError:
                row[k] = v
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="poissonquad", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value file overriding run defaults")
    p.add_argument("--format", choices=("csv", "json", "pretty"), default="pretty")
    p.add_argument("--out", help="write output here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("quad", help="trapezoidal sum for one step size")
    q.add_argument("--fn", required=True)
    q.add_argument("--h", type=float, required=True)
    q.add_argument("--n", type=int)
    q.add_argument("--p", type=float, help="error normalization exponent")
    q.set_defaults(run=cmd_quad)

    q = sub.add_parser("remainder", help="remainder from the time or Fourier side")
    q.add_argument("--fn", required=True)
    q.add_argument("--h", type=float, required=True)
    q.add_argument("--side", choices=("time", "spectral", "both"), default="both")
    q.set_defaults(run=cmd_remainder)

    q = sub.add_parser("modulus", help="moduli of smoothness on a grid of deltas")
    q.add_argument("--fn", required=True)
    q.add_argument("--r", type=int, default=2)
    q.add_argument("--deltas", default="0.001:0.1:log10")
    q.set_defaults(run=cmd_modulus)

    q = sub.add_parser("bounds", help="remainder bounds against the measured remainder")
    q.add_argument("--fn", required=True)
    q.add_argument("--h-grid", default="0.1:1:log:4")
    q.add_argument("--kinds", default="all")
    q.add_argument("--alpha", type=float)
    q.add_argument("--s", type=int, default=2)
    q.add_argument("--r", type=int, default=2)
    q.set_defaults(run=cmd_bounds)

    q = sub.add_parser("riesz", help="Riesz derivative at one or more points")
    q.add_argument("--fn", required=True)
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--t", default="0", help="comma-separated points")
    q.add_argument("--method", choices=("fourier", "difference", "both"), default="fourier")
    q.set_defaults(run=cmd_riesz)

    q = sub.add_parser("dist", help="distance from the Bernstein space")
    q.add_argument("--fn", required=True)
    q.add_argument("--alpha", type=float, default=0.0, help="weight exponent")
    q.add_argument("--sigma-grid", default="1:100:log")
    q.set_defaults(run=cmd_dist)

    q = sub.add_parser("mobius-recover", help="recover fhat(sigma) from remainders")
    q.add_argument("--fn", required=True)
    q.add_argument("--sigma", type=float, required=True)
    q.add_argument("--k", type=int, default=64)
    q.add_argument("--source", choices=("spectral", "exact"), default="spectral")
    q.set_defaults(run=cmd_mobius)

    q = sub.add_parser("sweep", help="remainders of translates over one period")
    q.add_argument("--fn", required=True)
    q.add_argument("--sigma", type=float, required=True)
    q.add_argument("--ntau", type=int, default=64)
    q.add_argument("--parseval", action="store_true", help="report the period mean instead")
    q.set_defaults(run=cmd_sweep)

    q = sub.add_parser("extremal", help="extremal function checks")
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--sigma", type=float, default=1.0)
    q.add_argument("--check", choices=("properties", "sharpness", "all"), default="all")
    q.set_defaults(run=cmd_extremal)

    q = sub.add_parser("table", help="reproduce one of the published tables")
    q.add_argument("--table", type=int, choices=sorted(TABLES), required=True)
    q.add_argument("--fn", help="substitute another registered function")
    q.set_defaults(run=cmd_table)

    q = sub.add_parser("order", help="fitted convergence order of the quadrature error")
    q.add_argument("--fn", required=True)
    q.add_argument("--h-range", required=True)
    q.add_argument("--min-decades", type=float, default=1.5)
    q.set_defaults(run=cmd_order)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
        rows = args.run(args, cfg)
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return EXIT_PRECONDITION
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.command == "table" and args.format == "csv":
        rows = _table_csv(rows)
    text = render(rows, args.format)
    out = args.out or cfg.out
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
