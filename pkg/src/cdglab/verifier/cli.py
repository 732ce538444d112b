"""``verify``: run builtin scenarios and write a JSON report.

Exit status is 0 iff every expectation of every selected scenario holds,
2 on usage errors.
"""
from __future__ import annotations

import argparse
import sys

from ..bar import CONVENTIONS
from ..errors import UsageError
from ..scalars import FieldSpec
from . import report as rp
from .scenarios import REGISTRY, Context, resolve


def _window(s: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in s.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like LO:HI, got {s!r}")
    if lo > hi:
        raise argparse.ArgumentTypeError("window needs LO <= HI")
    return lo, hi


def _field(s: str) -> FieldSpec:
    try:
        return FieldSpec.from_string(s)
    except (UsageError, ValueError) as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description="Run exact-arithmetic checks on cdg modules.")
    p.add_argument("--scenario", action="append", default=[], metavar="NAME", help="scenario to run (repeatable)")
    p.add_argument("--all", action="store_true", help="run every builtin scenario")
    p.add_argument("--list", action="store_true", help="list scenarios and exit")
    p.add_argument("--field", type=_field, default=FieldSpec(), help="q (default) or fp:P")
    p.add_argument("--window", type=_window, default=(-10, 10), help="degree window LO:HI (default -10:10)")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized scenarios (default 0)")
    p.add_argument("--report", metavar="PATH.json", help="write the JSON report here")
    p.add_argument("--bar-convention", choices=CONVENTIONS, default="shifted")
    p.add_argument("--jobs", type=int, default=1, help="run scenarios in parallel threads")
    p.add_argument("-q", "--quiet", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.list:
        for name in sorted(REGISTRY):
            print(f"{name:32s} {REGISTRY[name].summary}")
        return 0
    try:
        names = sorted(REGISTRY) if args.all else list(dict.fromkeys(args.scenario))
        scenarios = resolve(names)
    except UsageError as e:
        print(f"verify: {e}", file=sys.stderr)
        return 2
    ctx = Context(args.field, args.window, args.seed, args.bar_convention)
    report = rp.run(scenarios, ctx, max(1, args.jobs))
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(rp.emit(report))
    if not args.quiet:
        for e in report["scenarios"]:
            n_ok = sum(x["ok"] for x in e["expectations"])
            print(f"{'PASS' if e['ok'] else 'FAIL'}  {e['name']:32s} {n_ok}/{len(e['expectations'])}"
                  f"  {e['seconds']:.2f}s")
            if not e["ok"]:
                for x in e["expectations"]:
                    if not x["ok"]:
                        print(f"      failed: {x['claim']} [{x['provenance']}]")
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
