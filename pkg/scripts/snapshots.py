"""SVG frames of one run, taken after every k-th state change.

    python scripts/snapshots.py --algorithm hex --n 40 --init random --every 50 --out frames
"""

import argparse
from pathlib import Path

from amoebot.harness import run_single
from amoebot.harness.render import render_svg


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--algorithm", choices=["hex", "tri"], default="hex")
    parser.add_argument("--n", type=int, default=40)
    parser.add_argument("--init", choices=["line", "random"], default="random")
    parser.add_argument("--init-seed", type=int, default=0)
    parser.add_argument("--sched-seed", type=int, default=0)
    parser.add_argument("--every", type=int, default=50)
    parser.add_argument("--out", type=Path, default=Path("frames"))
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    frames = []

    def snapshot(event, cfg):
        if event.step and len(frames) * args.every <= event.step:
            path = args.out / f"{args.algorithm}_{len(frames):04d}.svg"
            render_svg(cfg, path)
            frames.append(path)

    result = run_single(args.algorithm, args.n, init=args.init, init_seed=args.init_seed,
                        sched_seed=args.sched_seed, observer=snapshot, keep_cfg=True)
    render_svg(result.cfg, args.out / f"{args.algorithm}_final.svg")
    print(f"{len(frames) + 1} frames in {args.out}, work={result.work}, valid={result.valid}")


if __name__ == "__main__":
    main()
