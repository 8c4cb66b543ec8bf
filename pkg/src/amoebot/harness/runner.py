"""Single runs, trace files and trace replay."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable

from amoebot.algorithms import Action, Kind, activate, rule_for
from amoebot.core import Configuration, Node
from amoebot.harness.generators import InitialConfig, make_initial
from amoebot.scheduler import (
    BudgetExhausted,
    Event,
    InvariantViolation,
    Policy,
    RunStats,
    Schedule,
    Simulation,
)
from amoebot.validation import ShapeReport, default_checkers, validate_shape

TRACE_VERSION = 1


@dataclass
class RunResult:
    algorithm: str
    n: int
    init: str
    init_seed: int
    sched_seed: int
    offset_seed: int | None
    policy: str
    valid: bool
    work: int
    rounds: int
    activations: int
    radius_or_side: int
    max_particle_moves: int
    max_idle_rounds: int
    error: str = ""
    report: ShapeReport | None = None
    final_nodes: frozenset = field(default_factory=frozenset)
    trace: list[str] = field(default_factory=list, repr=False)
    cfg: Configuration | None = field(default=None, repr=False)

    @property
    def ok(self) -> bool:
        return self.valid and not self.error


def trace_header(
    initial: InitialConfig, cfg: Configuration, algorithm: str, schedule: Schedule
) -> dict:
    return {
        "type": "init",
        "version": TRACE_VERSION,
        "algorithm": algorithm,
        "generator": initial.generator,
        "generator_seed": initial.generator_seed,
        "policy": schedule.policy.value,
        "rng_seed": schedule.rng_seed,
        "seed_node": list(initial.seed),
        "particles": [[p.head[0], p.head[1], p.offset] for p in cfg.particles],
    }


def run_single(
    algorithm: str,
    n: int,
    init: str = "line",
    init_seed: int = 0,
    sched_seed: int = 0,
    offset_seed: int | None = 0,
    policy: Policy | str = Policy.UNIFORM_RANDOM,
    max_rounds: int | None = None,
    check: bool = False,
    seed_offset: int = 0,
    record_trace: bool = False,
    observer: Callable[[Event, Configuration], None] | None = None,
    keep_cfg: bool = False,
) -> RunResult:
    """Build the initial configuration, run it and validate the final shape.

    Budget exhaustion and invariant violations are reported in ``error``
    rather than raised.
    """
    rule = rule_for(algorithm)
    initial = make_initial(init, n, init_seed)
    cfg = initial.build(rule, offset_seed=offset_seed, seed_offset=seed_offset)
    schedule = Schedule(rng_seed=sched_seed, policy=Policy(policy))
    header = trace_header(initial, cfg, rule.name, schedule) if record_trace else None
    sim = Simulation(cfg, rule, schedule, record_trace=record_trace)
    checkers = default_checkers() if check else {}
    error = ""
    try:
        sim.run_with_checks(max_rounds, checkers, observer=observer)
    except BudgetExhausted as exc:
        error = f"budget: {exc}"
    except InvariantViolation as exc:
        error = f"invariant: {exc}"
    stats = sim.stats
    report = None
    valid = False
    if not error:
        report = validate_shape(cfg, rule.name)
        valid = report.valid
    trace = []
    if record_trace:
        trace.append(json.dumps(header, separators=(",", ":")))
        trace.extend(sim.trace_lines())
        trace.append(json.dumps(end_record(stats, report), separators=(",", ":")))
    return RunResult(
        algorithm=rule.name,
        n=n,
        init=init,
        init_seed=init_seed,
        sched_seed=sched_seed,
        offset_seed=offset_seed,
        policy=schedule.policy.value,
        valid=valid,
        work=stats.movements,
        rounds=stats.rounds,
        activations=stats.activations,
        radius_or_side=report.radius_or_side if report else -1,
        max_particle_moves=max((p.moves for p in cfg.particles), default=0),
        max_idle_rounds=stats.max_idle_rounds,
        error=error,
        report=report,
        final_nodes=cfg.occupied_nodes(),
        trace=trace,
        cfg=cfg if keep_cfg else None,
    )


def end_record(stats: RunStats, report: ShapeReport | None) -> dict:
    return {
        "type": "end",
        "movements": stats.movements,
        "rounds": stats.rounds,
        "activations": stats.activations,
        "terminated": stats.terminated,
        "valid": None if report is None else report.valid,
    }


def write_trace(lines: Iterable[str], path: str | Path) -> None:
    with open(path, "w") as fh:
        for line in lines:
            fh.write(line + "\n")


class ReplayMismatch(AssertionError):
    pass


@dataclass
class ReplayResult:
    events: int
    work: int
    report: ShapeReport | None
    cfg: Configuration


def config_from_header(header: dict) -> Configuration:
    rule = rule_for(header["algorithm"])
    nodes = [Node(q, r) for q, r, _ in header["particles"]]
    offsets = {Node(q, r): o for q, r, o in header["particles"]}
    return Configuration.from_nodes(
        nodes, Node(*header["seed_node"]), offsets=offsets, seed_flags=rule.seed_init()
    )


def replay_trace(lines: Iterable[str], checkers: dict | None = None) -> ReplayResult:
    """Re-run the recorded activations without the scheduler's RNG.

    Each recorded particle is activated again; the decision must reproduce
    the recorded action, and every checker must hold afterwards.
    """
    records = [json.loads(line) for line in lines if line.strip()]
    if not records or records[0].get("type") != "init":
        raise ValueError("trace does not start with an init record")
    header = records[0]
    rule = rule_for(header["algorithm"])
    cfg = config_from_header(header)
    sim = Simulation(cfg, rule)
    if checkers is None:
        checkers = default_checkers()
    count = 0
    for rec in records[1:]:
        if rec.get("type") == "end":
            break
        pid = rec["particle"]
        action = activate(cfg.observe(pid), rule)
        recorded = Action(
            Kind(rec["action"]), rec["port"], tuple(tuple(f) for f in rec["flags"])
        )
        if action != recorded:
            raise ReplayMismatch(f"step {rec['step']}: recorded {recorded}, decided {action}")
        applied = sim.apply_action(pid, action)
        if applied != action:
            raise ReplayMismatch(f"step {rec['step']}: {action} could not be applied")
        if cfg.work != rec["work"]:
            raise ReplayMismatch(f"step {rec['step']}: work {cfg.work} != {rec['work']}")
        for name, check in checkers.items():
            if not check(cfg):
                raise InvariantViolation(name, rec["step"], sim.stats)
        count += 1
    report = None
    if all(p.state.name == "RETIRED" for p in cfg.particles):
        report = validate_shape(cfg, rule.name)
    return ReplayResult(count, cfg.work, report, cfg)

