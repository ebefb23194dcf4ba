"""Command line front end: single points and sweeps as CSV or JSON.

Every number printed comes straight from the library; the CLI only parses
flags, fans sweeps out over a thread pool and formats the result.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import List, Sequence

import numpy as np

from . import __version__
from .bound_state import solve_bound_state, supports_bound_state
from .core import ISOLATED, AtomConfig, ConfinedAtomError, NoBoundStateError
from .dalgarno_lewis import static_polarizability
from .fowler import DEFAULT_ETA, dynamic_polarizability
from .resonance import (
    asymptotic_ionization_rate,
    asymptotic_log_ionization_rate,
    asymptotic_stark_shift,
    solve_resonance,
)
from .spectral_oracle import DEFAULT_N, dynamic_alpha_oracle, spectral_model, static_alpha_oracle, trk_sum

EXIT_OK = 0
EXIT_NO_BOUND_STATE = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 64
EXIT_IO = 74

THREADS_ENV = "CONFINED_ATOM_THREADS"
FLOAT_FORMAT = "%.12e"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def _pmap(fn, items: Sequence) -> List:
    # Results come back in input order, so output never depends on scheduling.
    n = min(_threads(), max(1, len(items)))
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    return FLOAT_FORMAT % v


def _config(args) -> AtomConfig:
    try:
        if args.isolated:
            return AtomConfig(args.Z, ISOLATED)
        if args.a is None:
            raise UsageError("give --a or --isolated")
        return AtomConfig(args.Z, args.a)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _header(args, command: str) -> str:
    skip = {"func", "json", "out", "command"}
    parts = [f"{k}={v}" for k, v in sorted(vars(args).items()) if k not in skip]
    return f"# confined_atom {__version__} {command} " + " ".join(parts)


def _emit(args, command: str, columns: List[str], rows: List[list]) -> None:
    if args.json:
        doc = {
            "command": command,
            "parameters": {k: v for k, v in sorted(vars(args).items()) if k not in {"func", "json", "out", "command"}},
            "columns": columns,
            "rows": [{c: _json_value(v) for c, v in zip(columns, r)} for r in rows],
        }
        text = json.dumps(doc, indent=2, allow_nan=False) + "\n"
    else:
        lines = [_header(args, command), ",".join(columns)]
        lines += [",".join(_fmt(v) for v in r) for r in rows]
        text = "\n".join(lines) + "\n"
    out = getattr(args, "out", None)
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_bound(args) -> int:
    cfg = _config(args)
    if not supports_bound_state(cfg):
        print(
            f"no bound state: Z <= 1/(2a) (Z={cfg.Z:g}, a={cfg.a:g}, 1/(2a)={0.5 / cfg.a:g})",
            file=sys.stderr,
        )
        return EXIT_NO_BOUND_STATE
    bs = solve_bound_state(cfg)
    a = math.inf if cfg.isolated else cfg.a
    _emit(args, "bound", ["Z", "a", "k_b", "energy", "norm_A", "bound"], [[cfg.Z, a, bs.k_b, bs.energy, bs.norm_A, True]])
    return EXIT_OK


def _static_row(args, a: float):
    cfg = AtomConfig(args.Z, a)
    if not supports_bound_state(cfg):
        return None
    bs = solve_bound_state(cfg)
    iso = 1.25 / args.Z**4 if args.compare_isolated else math.nan
    asym = 1.25 / bs.k_b**4 if args.compare_asymptotic else math.nan
    return [a, bs.k_b, static_polarizability(bs, cfg), iso, asym]


def _check_charge(Z: float) -> None:
    try:
        AtomConfig(Z)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _json_value(v):
    # Strict JSON has no inf/nan; keep them readable as strings.
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def cmd_static_sweep(args) -> int:
    _check_charge(args.Z)
    if not (0 < args.a_min < args.a_max) or args.points < 1:
        raise UsageError("need 0 < a-min < a-max and points >= 1")
    grid = np.geomspace(args.a_min, args.a_max, args.points) if args.points > 1 else np.array([args.a_min])
    results = _pmap(lambda a: _static_row(args, float(a)), list(grid))
    rows = []
    for a, r in zip(grid, results):
        if r is None:
            print(f"note: a={a:.6g} skipped, no bound state (2Za <= 1)", file=sys.stderr)
        else:
            rows.append(r)
    _emit(args, "static-sweep", ["a", "k_b", "alpha", "alpha_isolated", "alpha_asymptotic"], rows)
    return EXIT_OK


def cmd_resonance(args) -> int:
    cfg = _config(args)
    if not supports_bound_state(cfg):
        print(f"no bound state: Z <= 1/(2a) (Z={cfg.Z:g}, a={cfg.a:g})", file=sys.stderr)
        return EXIT_NO_BOUND_STATE
    bs = solve_bound_state(cfg)

    def row(F):
        try:
            r = solve_resonance(cfg, F)
        except (ConfinedAtomError, ArithmeticError, ValueError) as exc:
            print(f"warning: F={F:g} failed: {exc}", file=sys.stderr)
            return [F, math.nan, math.nan, math.nan, math.nan, math.nan, math.nan, False]
        if not r.converged:
            print(f"warning: F={F:g} did not converge (residual {r.residual:.3g})", file=sys.stderr)
        return [
            F,
            r.stark_shift,
            r.gamma,
            r.log_gamma,
            asymptotic_stark_shift(bs, F),
            asymptotic_ionization_rate(bs, cfg, F),
            asymptotic_log_ionization_rate(bs, cfg, F),
            r.converged,
        ]

    rows = _pmap(row, list(args.F))
    cols = ["F", "stark_shift", "gamma", "log_gamma", "asymptotic_shift", "asymptotic_gamma", "asymptotic_log_gamma", "converged"]
    _emit(args, "resonance", cols, rows)
    return EXIT_OK if any(r[-1] for r in rows) else EXIT_NUMERICAL


def cmd_dynamic(args) -> int:
    if args.omega_points < 1 or args.omega_min < 0 or args.omega_max < args.omega_min:
        raise UsageError("need 0 <= omega-min <= omega-max and omega-points >= 1")
    if not args.eta > 0:
        raise UsageError("eta must be positive")
    _check_charge(args.Z)
    distances = list(args.a or [])
    if args.isolated:
        distances.append(ISOLATED)
    if not distances:
        raise UsageError("give at least one --a or --isolated")
    omegas = np.linspace(args.omega_min, args.omega_max, args.omega_points)
    tasks = []
    for a in distances:
        try:
            cfg = AtomConfig(args.Z, a)
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        if not supports_bound_state(cfg):
            print(f"note: a={a:g} skipped, no bound state (2Za <= 1)", file=sys.stderr)
            continue
        bs = solve_bound_state(cfg)
        tasks += [(cfg, bs, float(w)) for w in omegas]

    def row(t):
        cfg, bs, w = t
        alpha = dynamic_polarizability(bs, cfg, w, args.eta)
        return [math.inf if cfg.isolated else cfg.a, w, alpha.real, alpha.imag]

    rows = _pmap(row, tasks)
    _emit(args, "dynamic", ["a", "omega", "re_alpha", "im_alpha"], rows)
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = _config(args)
    if not supports_bound_state(cfg):
        print(f"no bound state: Z <= 1/(2a) (Z={cfg.Z:g}, a={cfg.a:g})", file=sys.stderr)
        return EXIT_NO_BOUND_STATE
    bs = solve_bound_state(cfg)
    model = spectral_model(cfg, args.L, args.N)
    cols = ["N", "h", "L", "E0", "energy", "alpha_oracle", "alpha", "trk"]
    row = [
        float(model.n_points),
        model.h,
        model.right,
        float(model.eigenvalues[0]),
        bs.energy,
        static_alpha_oracle(model),
        static_polarizability(bs, cfg),
        trk_sum(model),
    ]
    if args.omega is not None:
        a_dyn = dynamic_alpha_oracle(model, args.omega, args.eta)
        cols += ["omega", "re_alpha_oracle", "im_alpha_oracle"]
        row += [args.omega, a_dyn.real, a_dyn.imag]
    _emit(args, "oracle", cols, [row])
    return EXIT_OK


def _add_atom(p, allow_many_a: bool = False) -> None:
    p.add_argument("--Z", type=float, required=True, help="effective charge (a.u.)")
    if allow_many_a:
        p.add_argument("--a", type=float, action="append", help="wall distance (a.u.); repeatable")
    else:
        p.add_argument("--a", type=float, help="wall distance (a.u.)")
    p.add_argument("--isolated", action="store_true", help="no wall (a -> infinity)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="confined-atom", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="bound state of a single configuration")
    _add_atom(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("static-sweep", help="static polarizability on a log-spaced wall-distance grid")
    p.add_argument("--Z", type=float, required=True)
    p.add_argument("--a-min", type=float, required=True)
    p.add_argument("--a-max", type=float, required=True)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--compare-asymptotic", action="store_true", help="add 5/(4 k_b^4)")
    p.add_argument("--compare-isolated", action="store_true", help="add 5/(4 Z^4)")
    p.add_argument("--out", default="-")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_static_sweep)

    p = sub.add_parser("resonance", help="Stark shift and ionization rate from the determinant root")
    _add_atom(p)
    p.add_argument("--F", type=float, action="append", required=True, help="field strength; repeatable")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_resonance)

    p = sub.add_parser("dynamic", help="complex dynamic polarizability on a frequency grid")
    _add_atom(p, allow_many_a=True)
    p.add_argument("--omega-min", type=float, default=0.0)
    p.add_argument("--omega-max", type=float, default=1.0)
    p.add_argument("--omega-points", type=int, default=101)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.add_argument("--out", default="-")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_dynamic)

    p = sub.add_parser("oracle", help="finite-difference sum-over-states check")
    _add_atom(p)
    p.add_argument("--L", type=float, default=None, help="right box edge (default max(40, 20/k_b))")
    p.add_argument("--N", type=int, default=DEFAULT_N)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--eta", type=float, default=DEFAULT_ETA)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"confined-atom: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoBoundStateError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_NO_BOUND_STATE
    except OSError as exc:
        print(f"confined-atom: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfinedAtomError, ArithmeticError) as exc:
        print(f"confined-atom: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
