"""Batches of runs over (algorithm, n, generator seed, scheduler seed)."""

from __future__ import annotations

import csv
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from amoebot.harness.runner import RunResult, run_single
from amoebot.validation import lower_bound

CSV_HEADER = [
    "algorithm",
    "n",
    "init_seed",
    "sched_seed",
    "valid",
    "work",
    "rounds",
    "activations",
    "radius_or_side",
]


@dataclass
class ExperimentSpec:
    algorithms: list[str] = field(default_factory=lambda: ["hex"])
    n: list[int] = field(default_factory=lambda: [10, 20, 40])
    generator: str = "line"
    repetitions: int = 1
    policy: str = "uniform"
    sched_seeds: list[int] = field(default_factory=lambda: [0])
    offset_seed: int | None = 0
    check: bool = False
    max_rounds: int | None = None
    workers: int = 1
    csv: str | None = None
    summary: str | None = None

    def __post_init__(self) -> None:
        if isinstance(self.algorithms, str):
            self.algorithms = [self.algorithms]
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if not self.n or min(self.n) < 1:
            raise ValueError("every n must be at least 1")
        if not self.sched_seeds:
            raise ValueError("need at least one scheduler seed")

    @classmethod
    def from_file(cls, path: str | Path) -> ExperimentSpec:
        data = json.loads(Path(path).read_text())
        if "algorithm" in data:
            data["algorithms"] = data.pop("algorithm")
        return cls(**data)

    def jobs(self) -> list[dict]:
        out = []
        for algorithm in self.algorithms:
            for n in self.n:
                for rep in range(self.repetitions):
                    for sched_seed in self.sched_seeds:
                        out.append(
                            dict(
                                algorithm=algorithm,
                                n=n,
                                init=self.generator,
                                init_seed=rep,
                                sched_seed=sched_seed,
                                offset_seed=self.offset_seed,
                                policy=self.policy,
                                max_rounds=self.max_rounds,
                                check=self.check,
                            )
                        )
        return out


def _run_job(job: dict) -> RunResult:
    return run_single(**job)


def csv_row(result: RunResult) -> dict:
    return {
        "algorithm": result.algorithm,
        "n": result.n,
        "init_seed": result.init_seed,
        "sched_seed": result.sched_seed,
        "valid": str(result.ok).lower(),
        "work": result.work,
        "rounds": result.rounds,
        "activations": result.activations,
        "radius_or_side": result.radius_or_side,
    }


def loglog_slope(ns, values) -> float:
    """Least-squares slope of log(values) against log(ns)."""
    slope, _ = np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(values, float)), 1)
    return float(slope)


def summarize(spec: ExperimentSpec, results: list[RunResult]) -> dict:
    summary: dict = {
        "runs": len(results),
        "failures": [asdict_light(r) for r in results if not r.ok],
        "algorithms": {},
    }
    for algorithm in spec.algorithms:
        rows = [r for r in results if r.algorithm == algorithm]
        by_n: dict[int, list[int]] = {}
        for r in rows:
            by_n.setdefault(r.n, []).append(r.work)
        medians = {n: statistics.median(w) for n, w in sorted(by_n.items())}
        entry = {
            "median_work": medians,
            "max_particle_moves": max((r.max_particle_moves for r in rows), default=0),
        }
        if spec.generator == "line":
            entry["below_lower_bound"] = [
                asdict_light(r) for r in rows if r.work < lower_bound(algorithm, r.n)
            ]
            usable = [(n, m) for n, m in medians.items() if m > 0]
            if len(usable) >= 2:
                entry["work_slope"] = loglog_slope(*zip(*usable))
        summary["algorithms"][algorithm] = entry
    return summary


def asdict_light(result: RunResult) -> dict:
    skip = ("report", "final_nodes", "trace", "cfg")
    return {f.name: getattr(result, f.name) for f in fields(result) if f.name not in skip}


def run_experiment(spec: ExperimentSpec) -> tuple[list[dict], dict]:
    """Rows in parameter order plus a summary; failed runs stay in the batch."""
    jobs = spec.jobs()
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            results = list(pool.map(_run_job, jobs))
    else:
        results = [_run_job(job) for job in jobs]
    rows = [csv_row(r) for r in results]
    summary = summarize(spec, results)
    if spec.csv:
        write_csv(rows, spec.csv)
    if spec.summary:
        Path(spec.summary).write_text(json.dumps(summary, indent=2, default=str) + "\n")
    return rows, summary


def write_csv(rows: list[dict], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_HEADER)
        writer.writeheader()
        writer.writerows(rows)
