"""Command-line front end.

Exit codes: 0 success, 1 numerical failure, 2 input error, 3 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import ledger
from .jump import BudgetExhausted, CalibrationInconsistent, calibrate, grid_slice, jump_locus
from .linsys import RankAmbiguous, SectionL2, TwistParam, h0, kummer_section, lines_through, singular_points
from .newton import NonConvergent
from .schemes import InvalidScheme, UnsupportedJet, ZeroScheme
from .suites import ACCEPTANCE, SUITES, UnknownSuite, verify_suite
from .surface import ConfigError, SurfaceConfig, TorusPoint
from .theta import TruncationInsufficient

EXIT_OK, EXIT_NUMERICAL, EXIT_INPUT, EXIT_USAGE = 0, 1, 2, 3
NUMERICAL = (NonConvergent, BudgetExhausted, RankAmbiguous, TruncationInsufficient, CalibrationInconsistent)
INPUT = (ConfigError, InvalidScheme, UnsupportedJet, OSError, json.JSONDecodeError, ValueError, KeyError, TypeError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _round(obj):
    """Floats to 15 significant digits so reports are stable byte for byte."""
    if isinstance(obj, float):
        return float(f"{obj:.15g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if isinstance(obj, np.generic):
        return _round(obj.item())
    return obj


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(_round(report), indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load_config(args) -> SurfaceConfig:
    path = args.config or os.environ.get("PPAS_CONFIG")
    return SurfaceConfig.load(path) if path else SurfaceConfig()


def _point(text: str) -> TorusPoint:
    vals = [float(x) for x in text.split(",")]
    if len(vals) != 4:
        raise ValueError(f"a point needs 4 comma-separated lattice coordinates, got {text!r}")
    return TorusPoint.from_vector(vals)


def _report(cfg, command, inputs, outputs, start, passed=True) -> dict:
    return {
        "config": cfg.to_json(),
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "timings": {"seconds": time.perf_counter() - start},
        "passed": passed,
    }


def cmd_gen_config(args) -> int:
    SurfaceConfig().save(args.path)
    return EXIT_OK


def _calibration(cfg, args):
    return calibrate(cfg) if getattr(args, "calibrate", False) else None


def cmd_jump(args) -> int:
    start = time.perf_counter()
    cfg = _load_config(args)
    X = ZeroScheme.load(args.scheme)
    cal = calibrate(cfg) if args.calibrate else None
    kwargs = {"cal": cal} if cal else {}
    cands = [_point(c) for c in args.candidate or []]
    if args.mode == "confirm" and not cands:
        raise UsageError("confirm mode needs at least one --candidate")
    loc = jump_locus(X, args.i, cfg, mode=args.mode, candidates=cands, **kwargs)
    inputs = {"scheme": X.to_json(), "i": args.i, "mode": args.mode}
    outputs = {"locus": loc.to_json()}
    if cal:
        outputs["calibration"] = cal.to_json()
    _emit(_report(cfg, "jump", inputs, outputs, start), args.out)
    return EXIT_OK


def cmd_collinear(args) -> int:
    start = time.perf_counter()
    cfg = _load_config(args)
    X = ZeroScheme.load(args.scheme)
    sols = lines_through(X, cfg)
    out = [{"u": s.point.to_json(), "multiplicity": s.multiplicity} for s in sols]
    _emit(_report(cfg, "collinear", {"scheme": X.to_json()}, {"lines": out, "collinear": bool(sols)}, start), args.out)
    return EXIT_OK


def cmd_h0(args) -> int:
    start = time.perf_counter()
    cfg = _load_config(args)
    X = ZeroScheme.load(args.scheme)
    c = _point(args.twist)
    value = h0(X, TwistParam(c), cfg, args.i)
    _emit(_report(cfg, "h0", {"scheme": X.to_json(), "twist": c.to_json(), "i": args.i}, {"h0": value}, start), args.out)
    return EXIT_OK


def cmd_singular(args) -> int:
    start = time.perf_counter()
    cfg = _load_config(args)
    if args.kummer:
        s = kummer_section(_point(args.kummer), cfg)
    else:
        lam = json.loads(Path(args.section).read_text())
        s = SectionL2(tuple(complex(a, b) for a, b in lam))
    reps = singular_points(s, cfg)
    out = [{"point": r.point.to_json(), "type": r.type, "hessian_condition": r.hessian_condition} for r in reps]
    inputs = {"lambda": [[z.real, z.imag] for z in s.lam]}
    _emit(_report(cfg, "singular", inputs, {"singular_points": out}, start), args.out)
    return EXIT_OK


def cmd_ledger(args) -> int:
    rows = json.loads(ledger.export_tables(args.max_n))
    checks = [{"key": r["key"], "i": r["i"], "n": r["n"], "balanced": ledger.balance_check(row, row.n, row.i)}
              for r, row in zip(rows, ledger.table_rows(args.max_n))]
    ok = all(c["balanced"] for c in checks)
    text = json.dumps({"rows": rows, "balance": checks, "passed": ok}, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_NUMERICAL


def cmd_verify(args) -> int:
    start = time.perf_counter()
    cfg = _load_config(args)
    names = ACCEPTANCE if args.suite == "all" else [args.suite]
    for name in names:
        if name not in SUITES:
            raise UnknownSuite(name)
    cal = calibrate(cfg)
    reports = []
    for name in names:
        rep = verify_suite(name, cfg, cal, args.trials)
        reports.append({**rep.to_json(), "seconds": rep.seconds})
    ok = all(r["passes"] == r["trials"] for r in reports)
    inputs = {"suite": args.suite, "trials": args.trials}
    _emit(_report(cfg, "verify", inputs, {"calibration": cal.to_json(), "suites": reports}, start, ok), args.out)
    return EXIT_OK if ok else EXIT_NUMERICAL


def cmd_grid(args) -> int:
    cfg = _load_config(args)
    X = ZeroScheme.load(args.scheme)
    fixed = {"c3": 0.0, "c4": 0.0}
    if args.slice:
        for part in args.slice.split(","):
            key, _, val = part.partition("=")
            if key not in fixed:
                raise ValueError(f"slice keys are c3 and c4, got {key!r}")
            fixed[key] = float(val)
    if not 1 <= args.res <= 512:
        raise ValueError("--res must lie in [1, 512]")
    data = grid_slice(X, cfg, i=args.i, c3=fixed["c3"], c4=fixed["c4"], res=args.res)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(["c1", "c2", "log10_smin"])
        for a, b, s in data:
            w.writerow([f"{a:.15g}", f"{b:.15g}", f"{s:.15g}"])
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ppas", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, scheme=True):
        sp.add_argument("--config", help="config JSON (default: $PPAS_CONFIG or built-in defaults)")
        if scheme:
            sp.add_argument("scheme", help="scheme JSON file")
        sp.add_argument("--out", help="output file (default: stdout)")

    sp = sub.add_parser("gen-config", help="write the default configuration")
    sp.add_argument("path")
    sp.set_defaults(func=cmd_gen_config)

    sp = sub.add_parser("jump", help="jump locus of a scheme")
    common(sp)
    sp.add_argument("--i", type=int, choices=(1, 2), default=2)
    sp.add_argument("--mode", choices=("discover", "confirm"), default="discover")
    sp.add_argument("--candidate", action="append", help="dual point p1,p2,q1,q2 (confirm mode)")
    sp.add_argument("--calibrate", action="store_true", help="calibrate the dual coordinates first")
    sp.set_defaults(func=cmd_jump)

    sp = sub.add_parser("collinear", help="translates D_u containing a scheme")
    common(sp)
    sp.set_defaults(func=cmd_collinear)

    sp = sub.add_parser("h0", help="h^0 of a twisted ideal sheaf")
    common(sp)
    sp.add_argument("--twist", required=True, help="raw twist p1,p2,q1,q2")
    sp.add_argument("--i", type=int, choices=(1, 2), default=2)
    sp.set_defaults(func=cmd_h0)

    sp = sub.add_parser("singular", help="singular points of a divisor in |2l|")
    common(sp, scheme=False)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--kummer", help="x as p1,p2,q1,q2: the divisor D_x + D_-x")
    g.add_argument("--section", help="JSON file with four [re, im] coefficients")
    sp.set_defaults(func=cmd_singular)

    sp = sub.add_parser("ledger", help="classification tables and Chern balance")
    sp.add_argument("--max-n", type=int, default=8)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_ledger)

    sp = sub.add_parser("verify", help="run verification suites")
    common(sp, scheme=False)
    sp.add_argument("--suite", required=True, help="suite name or 'all'")
    sp.add_argument("--trials", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("grid", help="CSV of log10 s over a 2D slice of the dual torus")
    common(sp)
    sp.add_argument("--slice", help="fixed coordinates, e.g. c3=0.25,c4=0.5")
    sp.add_argument("--res", type=int, default=64)
    sp.add_argument("--i", type=int, choices=(1, 2), default=2)
    sp.set_defaults(func=cmd_grid)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, UnknownSuite) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_USAGE
    except NUMERICAL as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_NUMERICAL
    except INPUT as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
