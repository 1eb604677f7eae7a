"""Run verification suites and write one JSON report per suite.

    python3 scripts/run_suites.py --out reports/ [--trials N] [suite ...]
"""
import argparse
import json
import sys
from pathlib import Path

from ppas.jump import calibrate
from ppas.suites import ACCEPTANCE, SUITES, verify_suite
from ppas.surface import SurfaceConfig


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("suites", nargs="*", default=ACCEPTANCE, help="suite names (default: the acceptance set)")
    ap.add_argument("--config")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--out", default="reports")
    args = ap.parse_args(argv)

    unknown = [s for s in args.suites if s not in SUITES]
    if unknown:
        ap.error(f"unknown suites: {', '.join(unknown)}")
    cfg = SurfaceConfig.load(args.config) if args.config else SurfaceConfig()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    cal = calibrate(cfg)
    ok = True
    for name in args.suites:
        rep = verify_suite(name, cfg, cal, args.trials)
        ok &= rep.ok
        (out / f"{name}.json").write_text(json.dumps({**rep.to_json(), "seconds": rep.seconds}, indent=2, default=str) + "\n")
        print(f"{'PASS' if rep.ok else 'FAIL'} {name:22s} {rep.passes}/{rep.trials}  {rep.seconds:7.1f}s", flush=True)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
