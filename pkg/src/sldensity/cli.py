"""Command-line front end: ``sldensity density | rho | converge | table``.

Exit status is 0 on success, 2 for invalid input (the message names the
offending key) and 3 when a numerical failure occurred; rows computed before
the failure are still written, with ``FAILED`` in the status column.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import time
from dataclasses import dataclass, fields
from typing import List, Optional, Sequence

from . import appell
from .density import auto_density, density_at
from .errors import MatchingPointError, SLDensityError, TurningPointError
from .potentials import Potential, bessel, hydrogen, make_barrier, make_rational
from .reference import (bessel_frac_example, bessel_int_example, coulomb_example,
                        exact_density, hydrogen_example, rho_closed_form_oracle)
from .spectral import NAMED_GRIDS, rho_grid

COMMANDS = ("density", "rho", "converge", "table")
PRESETS = ("t8.1", "t8.2", "t8.3", "t8.4", "t9.1", "t9.2-errors")
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3

# matching points listed next to the sixteen-point grid in the density tables
TABLE8_X = (320.0, 225.0, 160.0, 100.0, 71.0, 50.0, 32.0, 22.5, 16.0, 10.0, 7.0, 5.0,
            3.2, 2.2, 1.6, 1.0)


class ConfigError(ValueError):
    """Invalid user input; ``key`` names the offending option."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


# ---------------------------------------------------------------- parsing

def _kv(body: str, key: str):
    out = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        if "=" not in item:
            raise ConfigError(key, f"expected name=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _num(d, name, key, cast=float, default=None):
    if name not in d:
        if default is not None:
            return default
        raise ConfigError(key, f"missing parameter {name!r}")
    try:
        v = cast(d.pop(name))
    except ValueError:
        raise ConfigError(key, f"parameter {name!r} is not a valid {cast.__name__}") from None
    if isinstance(v, float) and not math.isfinite(v):
        raise ConfigError(key, f"parameter {name!r} must be finite")
    return v


def parse_potential(spec: str) -> Potential:
    """``rational:A=..,B=..``, ``barrier:ell=..,a=..``, ``coulomb:ell=..,a=..`` or ``bessel:nu=..``."""
    key = "potential"
    if ":" not in spec:
        raise ConfigError(key, f"expected kind:params, got {spec!r}")
    kind, body = spec.split(":", 1)
    kind = kind.strip().lower()
    d = _kv(body, key)
    try:
        if kind == "rational":
            p = make_rational(_num(d, "A", key), _num(d, "B", key))
        elif kind == "barrier":
            p = make_barrier(_num(d, "ell", key, int), _num(d, "a", key, default=1.0))
        elif kind == "coulomb":
            p = hydrogen(_num(d, "ell", key, int), _num(d, "a", key))
        elif kind == "bessel":
            p = bessel(_num(d, "nu", key))
        else:
            raise ConfigError(key, f"unknown potential kind {kind!r}")
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(key, str(exc)) from None
    if d:
        raise ConfigError(key, f"unexpected parameter(s) {sorted(d)}")
    return p


def parse_lambdas(spec: str) -> tuple:
    key = "lambda"
    spec = spec.strip()
    if spec.startswith("grid:"):
        name = spec[5:]
        if name not in NAMED_GRIDS:
            raise ConfigError(key, f"unknown grid {name!r}; known: {sorted(NAMED_GRIDS)}")
        return NAMED_GRIDS[name]
    try:
        vals = tuple(float(s) for s in spec.split(",") if s.strip())
    except ValueError:
        raise ConfigError(key, f"not a comma-separated list of numbers: {spec!r}") from None
    if not vals:
        raise ConfigError(key, "empty list")
    if any(not (math.isfinite(v) and v > 0) for v in vals):
        raise ConfigError(key, "values must be finite and positive")
    return vals


# ---------------------------------------------------------------- config

@dataclass
class RunConfig:
    command: str
    potential: Optional[str] = None
    lam: Optional[str] = None
    tol: float = 1e-8
    rho0: float = 0.0
    method: Optional[str] = None
    N: Optional[int] = None
    format: str = "csv"
    out: Optional[str] = None
    preset: Optional[str] = None
    x: Optional[str] = None

    # textual key for each field; "lam" is spelled "lambda" outside Python
    _KEYS = {"lam": "lambda"}

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError("command", f"expected one of {COMMANDS}")
        if self.format not in ("csv", "text"):
            raise ConfigError("format", "expected csv or text")
        if not (isinstance(self.tol, float) and math.isfinite(self.tol)):
            raise ConfigError("tol", "must be a finite number")
        lo, hi = (1e-10, 1e-3) if self.command == "rho" else (1e-12, 1e-2)
        if self.command != "table" and not lo <= self.tol <= hi:
            raise ConfigError("tol", f"{self.tol} outside [{lo:g}, {hi:g}] for {self.command}")
        if self.command == "table":
            if self.preset not in PRESETS:
                raise ConfigError("preset", f"expected one of {PRESETS}")
            return self
        if not self.potential:
            raise ConfigError("potential", "required")
        if not self.lam:
            raise ConfigError("lambda", "required")
        parse_potential(self.potential)
        parse_lambdas(self.lam)
        if self.method is not None:
            try:
                appell.parse_method(self.method, self.N)
            except ValueError as exc:
                raise ConfigError("method", str(exc)) from None
        if self.N is not None and self.N < 1:
            raise ConfigError("N", "must be >= 1")
        if self.x is not None:
            _parse_x(self.x)
        return self

    def to_text(self) -> str:
        lines = [f"{self._KEYS.get(f.name, f.name)}={getattr(self, f.name)!r}"
                 for f in fields(self) if getattr(self, f.name) is not None]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, **overrides) -> "RunConfig":
        inv = {v: k for k, v in cls._KEYS.items()}
        names = {f.name: f for f in fields(cls)}
        vals = {}
        for n, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {n}", f"expected key=value, got {raw!r}")
            k, v = (s.strip() for s in line.split("=", 1))
            k = inv.get(k, k)
            if k not in names:
                raise ConfigError(k, "unknown key")
            vals[k] = _coerce(k, _unquote(v))
        vals.update({k: v for k, v in overrides.items() if v is not None})
        if "command" not in vals:
            raise ConfigError("command", "required")
        return cls(**vals)


def _unquote(v: str) -> str:
    if len(v) >= 2 and v[0] == v[-1] and v[0] in "'\"":
        return v[1:-1]
    return v


def _coerce(k, v):
    try:
        if k in ("tol", "rho0"):
            return float(v)
        if k == "N":
            return int(v)
    except ValueError:
        raise ConfigError(k, f"invalid value {v!r}") from None
    return v


def _parse_x(spec: str):
    try:
        xs = [float(s) for s in spec.split(",") if s.strip()]
    except ValueError:
        raise ConfigError("x", f"not a list of numbers: {spec!r}") from None
    if not xs or any(not (math.isfinite(v) and v > 0) for v in xs):
        raise ConfigError("x", "values must be finite and positive")
    return sorted(xs)


# ---------------------------------------------------------------- output

def fmt(v) -> str:
    """12 significant digits; scientific notation below 1e-3 in magnitude."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    v = float(v)
    if v == 0.0 or not math.isfinite(v):
        return repr(v) if not math.isfinite(v) else "0"
    if abs(v) < 1e-3:
        return f"{v:.11e}"
    return f"{v:.12g}"


@dataclass
class Table:
    header: List[str]
    rows: List[list]
    title: str = ""
    failed: bool = False

    def render(self, form: str) -> str:
        cells = [[fmt(c) for c in r] for r in self.rows]
        if form == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(self.header)
            w.writerows(cells)
            return buf.getvalue()
        widths = [max([len(h)] + [len(r[i]) for r in cells]) for i, h in enumerate(self.header)]
        line = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()  # noqa: E731
        out = [self.title] if self.title else []
        out += [line(self.header), "  ".join("-" * w for w in widths)]
        out += [line(r) for r in cells]
        return "\n".join(out) + "\n"


def _status(exc: Exception) -> str:
    return f"FAILED: {type(exc).__name__}: {exc}"


# ---------------------------------------------------------------- commands

def cmd_density(cfg: RunConfig) -> Table:
    p = parse_potential(cfg.potential)
    t = Table(["lambda", "f", "x_match", "err_est", "method", "status"], [])
    for lam in parse_lambdas(cfg.lam):
        try:
            d = auto_density(p, lam, cfg.tol, method=cfg.method, N=cfg.N)
            t.rows.append([lam, d.value, d.x_match, d.err_est, d.method, "ok"])
        except SLDensityError as exc:
            t.rows.append([lam, None, None, None, cfg.method or "", _status(exc)])
            t.failed = True
    return t


def cmd_rho(cfg: RunConfig) -> Table:
    p = parse_potential(cfg.potential)
    kw = {}
    if cfg.method is not None:
        kw = {"method": cfg.method, "N": cfg.N}
    g = rho_grid(p, parse_lambdas(cfg.lam), cfg.rho0, cfg.tol, **kw)
    t = Table(["lambda", "rho", "interval_err_est", "f_evals", "status"], [])
    for lam, r, rec in zip(g.lambdas, g.rho, g.records):
        status = rec.flag if rec.error is None else f"FAILED: {rec.error}"
        t.rows.append([lam, r, rec.err_est, rec.f_evals, status])
    t.failed = not g.ok
    return t


def _doubling_x(p: Potential, lam: float, steps: int = 6):
    from .density import X_MIN, matching_heuristic
    from .frobenius import series_cutoff
    x0 = max(matching_heuristic(p.q1, p.q0, lam), 1.25 * series_cutoff(p, lam), X_MIN)
    return [x0 * 2.0 ** k for k in range(steps + 1)]


def cmd_converge(cfg: RunConfig) -> Table:
    """Density at a sequence of matching points for every applicable method."""
    from .density import DensityEvaluator
    p = parse_potential(cfg.potential)
    methods = ["F1", "F2", "F3"]
    if p.is_rational:
        methods.append(f"f{cfg.N or 6}")
    if cfg.method is not None:
        name, n = appell.parse_method(cfg.method, cfg.N)
        methods = [f"f{n}" if name == "fN" else name]
    t = Table(["lambda", "x"] + methods + ["status"], [])
    for lam in parse_lambdas(cfg.lam):
        xs = _parse_x(cfg.x) if cfg.x else _doubling_x(p, lam)
        evs = {}
        for m in methods:
            try:
                evs[m] = DensityEvaluator(p, lam, m)
            except SLDensityError as exc:
                evs[m] = exc
        for x in xs:
            row, status = [lam, x], "ok"
            for m in methods:
                ev = evs[m]
                try:
                    if isinstance(ev, Exception):
                        raise ev
                    row.append(ev(x))
                except (TurningPointError, MatchingPointError):
                    # expected at small x; not a failure
                    row.append(None)
                    if status == "ok":
                        status = "n/a: x too small"
                except SLDensityError as exc:
                    row.append(None)
                    status = _status(exc)
                    t.failed = True
            t.rows.append(row + [status])
    return t


def _table8(ex_factory, title) -> Table:
    ex = ex_factory()
    t = Table(["lambda", "x", "err_F1", "err_F2", "err_F3", "err_f6", "status"], [], title)
    for lam, x in zip(NAMED_GRIDS["paper16"], TABLE8_X):
        exact = exact_density(ex, lam)
        row, status = [lam, x], "ok"
        for m in ("F1", "F2", "F3", "f6"):
            try:
                v = density_at(ex.potential, lam, x, m).value
                e = exact - v
                row.append(e if abs(exact) < 1 else e / exact)
            except SLDensityError as exc:
                row.append(None)
                status = _status(exc)
                t.failed = True
        t.rows.append(row + [status])
    return t


def _table84() -> Table:
    cols = [f"ell={ell}" for ell in (0, 1, 2)]
    t = Table(["lambda", "x"] + cols + ["status"], [],
              "F3 density for the barrier potential (a=1)")
    pots = [make_barrier(ell, 1.0) for ell in (0, 1, 2)]
    for lam in (7.0, 10.0, 20.0, 40.0):
        for x in (5.0, 10.0, 15.0, 20.0, 25.0):
            row, status = [lam, x], "ok"
            for p in pots:
                try:
                    row.append(density_at(p, lam, x, "F3").value)
                except SLDensityError as exc:
                    row.append(None)
                    status = _status(exc)
                    t.failed = True
            t.rows.append(row + [status])
    return t


def _table91() -> Table:
    grid = (1.0, 2.0, 4.0, 10.0, 20.0, 40.0)
    ex = bessel_int_example(1)
    g = rho_grid(ex.potential, grid, 0.0, 1e-7)
    t = Table(["lambda", "rho", "exact", "error", "status"], [],
              "rho for q = 0.75/x**2, tol 1e-7")
    for lam, r, rec in zip(g.lambdas, g.rho, g.records):
        e = rho_closed_form_oracle(ex, lam)
        t.rows.append([lam, r, e, (e - r) if e < 1 else (e - r) / e, rec.flag])
    t.failed = not g.ok
    return t


def four_examples():
    return (("bessel_int(1)", bessel_int_example(1)),
            ("hydrogen(1,1)", hydrogen_example(1, 1.0)),
            ("coulomb(1,-1)", coulomb_example(1, -1.0)),
            ("bessel_frac(1/3)", bessel_frac_example(1.0 / 3.0)))


def max_rho_error(ex, grid, tol):
    """Largest tabulated-metric error of rho_grid against the oracle, plus runtime."""
    t0 = time.perf_counter()
    g = rho_grid(ex.potential, grid, 0.0, tol)
    dt = time.perf_counter() - t0
    worst = 0.0
    for lam, r in zip(g.lambdas, g.rho):
        e = rho_closed_form_oracle(ex, lam)
        err = abs(r - e) / (abs(e) if abs(e) > 1 else 1.0)
        worst = max(worst, err) if math.isfinite(err) else math.inf
    return worst, dt, g.ok


def _table92(tols=(1e-4, 1e-6, 1e-8, 1e-10)) -> Table:
    t = Table(["potential", "tol", "max_error", "seconds", "status"], [],
              "max rho error over the 16-point grid")
    for name, ex in four_examples():
        for tol in tols:
            err, dt, ok = max_rho_error(ex, NAMED_GRIDS["paper16"], tol)
            t.rows.append([name, tol, err, round(dt, 3), "ok" if ok else "FAILED"])
            t.failed |= not ok
    return t


def cmd_table(cfg: RunConfig) -> Table:
    preset = cfg.preset
    if preset == "t8.1":
        return _table8(lambda: hydrogen_example(1, 1.0), "density errors, q = -1/x + 2/x**2")
    if preset == "t8.2":
        return _table8(lambda: hydrogen_example(2, 1.0), "density errors, q = -1/x + 6/x**2")
    if preset == "t8.3":
        return _table8(lambda: bessel_frac_example(1.0 / 3.0), "density errors, q = -5/(36 x**2)")
    if preset == "t8.4":
        return _table84()
    if preset == "t9.1":
        return _table91()
    return _table92()


HANDLERS = {"density": cmd_density, "rho": cmd_rho, "converge": cmd_converge,
            "table": cmd_table}


def run(cfg: RunConfig, stream=None) -> int:
    """Execute ``cfg`` and write the table; returns the exit status."""
    cfg.validate()
    table = HANDLERS[cfg.command](cfg)
    text = table.render(cfg.format)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)
    return EXIT_NUMERIC if table.failed else EXIT_OK


# ---------------------------------------------------------------- argv

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sldensity",
                                 description="Spectral density and spectral function of "
                                             "-y'' + q y = lam y on (0, inf).")
    ap.add_argument("--config", help="key=value file; command-line flags take precedence")
    sub = ap.add_subparsers(dest="command")

    def common(sp, table=False):
        if not table:
            sp.add_argument("--potential",
                            help="rational:A=..,B=.. | barrier:ell=..,a=.. | coulomb:ell=..,a=.. "
                                 "| bessel:nu=..")
            sp.add_argument("--lambda", dest="lam", help="comma list or grid:paper16")
            sp.add_argument("--tol", type=float)
            sp.add_argument("--method", help="F1, F2, F3, F3-literal, fN or f<N>")
            sp.add_argument("--N", type=int)
        sp.add_argument("--format", choices=("csv", "text"))
        sp.add_argument("--out")

    common(sub.add_parser("density", help="f(lam) with automatic matching point"))
    r = sub.add_parser("rho", help="rho(lam) on a grid")
    common(r)
    r.add_argument("--rho0", type=float)
    c = sub.add_parser("converge", help="f_x(lam) over increasing matching points")
    common(c)
    c.add_argument("--x", help="comma list of matching points (default: doubling)")
    t = sub.add_parser("table", help="reproduce a reference table")
    t.add_argument("preset", choices=PRESETS)
    common(t, table=True)
    return ap


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    given = {k: v for k, v in vars(ns).items() if k != "config" and v is not None}
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError("config", str(exc)) from None
        return RunConfig.from_text(text, **given)
    if "command" not in given:
        raise ConfigError("command", f"expected one of {COMMANDS}")
    return RunConfig(**given)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(argv)
        return run(cfg)
    except ConfigError as exc:
        print(f"sldensity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SLDensityError as exc:
        print(f"sldensity: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
