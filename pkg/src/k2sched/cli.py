"""``k2sched`` command line: gen, test, sweep, fig1."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Sequence

from .experiment import (
    ALL_TESTS,
    SweepConfig,
    default_ratio_grid,
    emit_csv,
    figure1_csv,
    figure1_scan,
    resolve_tests,
    run_sweep,
    run_test_suite,
)
from .model import read_tasksets, write_tasksets
from .workload import DEADLINE_MODELS, GenConfig, make_taskset


def _test_list(text: str) -> list[str]:
    names = [s.strip() for s in text.split(",") if s.strip()]
    if not names:
        raise argparse.ArgumentTypeError("empty test list")
    return names


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=None,
                   help="tasks per set (default 10, or 5 per processor when --processors > 1)")
    p.add_argument("--p", type=int, default=1, help="period range is 1 to 10^p")
    p.add_argument("--deadline-model", default="implicit", choices=sorted(DEADLINE_MODELS))
    p.add_argument("--seed", type=int, default=0)


def _default_n(args) -> int:
    if args.n is not None:
        return args.n
    m = getattr(args, "processors", 1)
    return 5 * m if m > 1 else 10


def _open_out(path: str | None):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def _write(path: str | None, text: str) -> None:
    out = _open_out(path)
    try:
        out.write(text)
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_gen(args) -> int:
    if args.count < 1:
        raise ValueError("--count must be >= 1")
    base = GenConfig(_default_n(args), args.target_util, args.p, args.deadline_model, args.seed)
    sets = (make_taskset(replace(base, seed=args.seed ^ i)) for i in range(args.count))
    out = _open_out(args.out)
    try:
        write_tasksets(sets, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_test(args) -> int:
    resolve_tests(args.tests, args.processors)
    src = sys.stdin if args.input == "-" else open(args.input)
    lines = ["set,test,schedulable"]
    try:
        for i, ts in enumerate(read_tasksets(src)):
            for name, ok in run_test_suite(ts, args.tests, args.processors).items():
                lines.append(f"{i},{name},{int(ok)}")
    finally:
        if src is not sys.stdin:
            src.close()
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_sweep(args) -> int:
    if args.workers < 1:
        raise ValueError("--workers must be >= 1")
    n = _default_n(args)
    gen = GenConfig(n, min(args.util_to * args.processors, n), args.p, args.deadline_model, args.seed)
    cfg = SweepConfig(args.util_from, args.util_to, args.step, args.sets_per_level,
                      gen, tuple(args.tests), args.processors)
    _write(args.out, emit_csv(run_sweep(cfg, workers=args.workers)))
    return 0


def cmd_fig1(args) -> int:
    if not 0 < args.step < 1:
        raise ValueError("--step must be in (0, 1)")
    _write(args.out, figure1_csv(figure1_scan(args.u1, default_ratio_grid(args.step))))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k2sched", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    tests_help = "comma-separated test names: " + ", ".join(ALL_TESTS)

    g = sub.add_parser("gen", help="generate task sets as JSON lines")
    _add_gen_flags(g)
    g.add_argument("--target-util", type=float, required=True, help="total utilization per set")
    g.add_argument("--count", type=int, default=1, help="number of sets (set i uses seed ^ i)")
    g.add_argument("--processors", type=int, default=1, help="only sets the default --n")
    g.add_argument("--out", default=None, help="output file (default stdout)")
    g.set_defaults(func=cmd_gen)

    t = sub.add_parser("test", help="run tests on task sets read as JSON lines")
    t.add_argument("--input", default="-", help="input file (default stdin)")
    t.add_argument("--tests", type=_test_list, required=True, help=tests_help)
    t.add_argument("--processors", type=int, default=1)
    t.add_argument("--out", default=None)
    t.set_defaults(func=cmd_test)

    s = sub.add_parser("sweep", help="acceptance ratios per utilization level, as CSV")
    _add_gen_flags(s)
    s.add_argument("--util-from", type=float, default=0.05)
    s.add_argument("--util-to", type=float, default=1.0)
    s.add_argument("--step", type=float, default=0.05)
    s.add_argument("--sets-per-level", type=int, default=100)
    s.add_argument("--tests", type=_test_list, required=True, help=tests_help)
    s.add_argument("--processors", type=int, default=1,
                   help="levels are normalized by this count (sum U / M)")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_sweep)

    f = sub.add_parser("fig1", help="two-task bound comparison over T1/T2 ratios, as CSV")
    f.add_argument("--u1", type=float, default=0.3)
    f.add_argument("--step", type=float, default=0.01, help="ratio grid step")
    f.add_argument("--out", default=None)
    f.set_defaults(func=cmd_fig1)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"k2sched {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
