"""Median work on line configurations against n, with the log-log slope.

    python scripts/work_scaling.py --n 16 32 64 128 --seeds 5 --csv scaling.csv
"""

import argparse

from amoebot.harness import ExperimentSpec, run_experiment
from amoebot.validation import lower_bound


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--algorithms", nargs="+", default=["hex", "tri"])
    parser.add_argument("--n", nargs="+", type=int, default=[16, 32, 64, 128, 256])
    parser.add_argument("--seeds", type=int, default=5, help="number of scheduler seeds")
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--csv", default=None)
    args = parser.parse_args()

    spec = ExperimentSpec(
        algorithms=args.algorithms,
        n=args.n,
        generator="line",
        sched_seeds=list(range(args.seeds)),
        workers=args.workers,
        csv=args.csv,
    )
    _, summary = run_experiment(spec)
    for algorithm, entry in summary["algorithms"].items():
        print(f"{algorithm}: slope {entry.get('work_slope', float('nan')):.3f}, "
              f"max moves by one particle {entry['max_particle_moves']}")
        print(f"  {'n':>5} {'median work':>12} {'lower bound':>12} {'ratio':>7}")
        for n, work in entry["median_work"].items():
            bound = lower_bound(algorithm, n)
            ratio = work / bound if bound else float("nan")
            print(f"  {n:>5} {work:>12.0f} {bound:>12} {ratio:>7.2f}")
    if summary["failures"]:
        print(f"{len(summary['failures'])} runs failed")


if __name__ == "__main__":
    main()
