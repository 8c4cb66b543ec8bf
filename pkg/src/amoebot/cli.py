"""Command line: ``amoebot run|experiment|validate|lowerbound``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from amoebot.harness.experiment import ExperimentSpec, run_experiment
from amoebot.harness.render import render_ascii, render_svg
from amoebot.harness.runner import ReplayMismatch, replay_trace, run_single, write_trace
from amoebot.scheduler import InvariantViolation, Policy
from amoebot.validation import lower_bound

EXIT_OK = 0
EXIT_INVALID_SHAPE = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3
EXIT_BUDGET = 4


def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amoebot", description="Hexagon and triangle formation on the triangular grid."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one simulation")
    run.add_argument("--algorithm", choices=["hex", "tri"], required=True)
    run.add_argument("--n", type=positive_int, required=True)
    run.add_argument("--init", choices=["line", "random"], default="line")
    run.add_argument("--init-seed", type=int, default=0)
    run.add_argument("--sched-seed", type=int, default=0)
    run.add_argument("--offset-seed", type=int, default=0)
    run.add_argument("--seed-offset", type=int, default=0, help="label offset of the seed")
    run.add_argument("--policy", choices=[p.value for p in Policy], default=Policy.UNIFORM_RANDOM.value)
    run.add_argument("--max-rounds", type=positive_int, default=None)
    run.add_argument("--trace", type=Path, default=None, help="write the event trace here")
    run.add_argument("--svg-every", type=positive_int, default=None, metavar="K",
                     help="write an SVG frame every K state-changing events")
    run.add_argument("--svg-dir", type=Path, default=Path("frames"))
    run.add_argument("--check", action="store_true", help="check invariants after every action")
    run.add_argument("--ascii", action="store_true", help="print the final configuration")

    exp = sub.add_parser("experiment", help="run a batch described by a JSON spec")
    exp.add_argument("--spec", type=Path, required=True)
    exp.add_argument("--csv", type=Path, default=None, help="override the CSV path of the spec")

    val = sub.add_parser("validate", help="replay a trace with every checker enabled")
    val.add_argument("--trace", type=Path, required=True)

    lb = sub.add_parser("lowerbound", help="work lower bound for a line of n particles")
    lb.add_argument("--algorithm", choices=["hex", "tri"], required=True)
    lb.add_argument("--n", type=positive_int, required=True)
    return parser


def cmd_run(args: argparse.Namespace) -> int:
    counter = {"events": 0, "frames": 0}

    def snapshot(event, cfg):
        counter["events"] += 1
        if counter["events"] % args.svg_every == 0:
            render_svg(cfg, args.svg_dir / f"frame_{counter['frames']:05d}.svg")
            counter["frames"] += 1

    if args.svg_every:
        args.svg_dir.mkdir(parents=True, exist_ok=True)

    result = run_single(
        args.algorithm,
        args.n,
        init=args.init,
        init_seed=args.init_seed,
        sched_seed=args.sched_seed,
        offset_seed=args.offset_seed,
        policy=args.policy,
        max_rounds=args.max_rounds,
        check=args.check,
        seed_offset=args.seed_offset,
        record_trace=args.trace is not None,
        observer=snapshot if args.svg_every else None,
        keep_cfg=True,
    )
    if args.trace is not None:
        write_trace(result.trace, args.trace)
    if args.svg_every:
        render_svg(result.cfg, args.svg_dir / "final.svg")
    print(f"algorithm={result.algorithm} n={result.n} work={result.work} "
          f"rounds={result.rounds} activations={result.activations} valid={str(result.valid).lower()}")
    if args.ascii:
        print(render_ascii(result.cfg), end="")
    if result.error.startswith("budget"):
        print(result.error, file=sys.stderr)
        return EXIT_BUDGET
    if result.error:
        print(result.error, file=sys.stderr)
        return EXIT_INVARIANT
    if not result.valid:
        print(f"invalid shape: {result.report.failure_reason}", file=sys.stderr)
        return EXIT_INVALID_SHAPE
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    spec = ExperimentSpec.from_file(args.spec)
    if args.csv is not None:
        spec.csv = str(args.csv)
    rows, summary = run_experiment(spec)
    print(json.dumps(summary, indent=2, default=str))
    if summary["failures"]:
        return EXIT_INVALID_SHAPE
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    lines = args.trace.read_text().splitlines()
    try:
        result = replay_trace(lines)
    except ReplayMismatch as exc:
        print(f"replay mismatch: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    if result.report is None:
        print(f"replayed {result.events} events, work={result.work}; run did not terminate")
        return EXIT_BUDGET
    print(f"replayed {result.events} events, work={result.work}, "
          f"valid={str(result.report.valid).lower()}")
    return EXIT_OK if result.report.valid else EXIT_INVALID_SHAPE


def cmd_lowerbound(args: argparse.Namespace) -> int:
    print(lower_bound(args.algorithm, args.n))
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "experiment": cmd_experiment,
    "validate": cmd_validate,
    "lowerbound": cmd_lowerbound,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
