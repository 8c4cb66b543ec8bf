"""Fair asynchronous execution of atomic particle activations."""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from amoebot.algorithms import Action, Kind, SnakeRule, activate
from amoebot.core import Configuration, MovementError, State

Checker = Callable[[Configuration], bool]


class Policy(str, enum.Enum):
    UNIFORM_RANDOM = "uniform"
    ROUND_ROBIN = "round-robin"
    ADVERSARIAL = "adversarial"


@dataclass
class Schedule:
    rng_seed: int = 0
    policy: Policy = Policy.UNIFORM_RANDOM
    # ADVERSARIAL: one activation order per round; random orders once exhausted
    permutations: Iterable[Sequence[int]] | None = None


@dataclass
class Event:
    step: int
    round: int
    particle: int
    action: Action
    nodes: tuple[tuple[int, int], ...]
    work: int

    def to_record(self) -> dict:
        return {
            "step": self.step,
            "round": self.round,
            "particle": self.particle,
            "action": self.action.kind.value,
            "port": self.action.port,
            "flags": [list(f) for f in self.action.flags],
            "nodes": [list(v) for v in self.nodes],
            "work": self.work,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))


@dataclass
class RunStats:
    movements: int = 0
    expansions: int = 0
    contractions: int = 0
    rounds: int = 0
    activations: int = 0
    state_changes: int = 0
    terminated: bool = False
    # longest stretch of completed rounds without any movement or state change
    max_idle_rounds: int = 0
    events: list[Event] = field(default_factory=list)


class BudgetExhausted(RuntimeError):
    def __init__(self, stats: RunStats, max_rounds: int):
        super().__init__(f"no termination within {max_rounds} rounds")
        self.stats = stats
        self.max_rounds = max_rounds


class InvariantViolation(AssertionError):
    def __init__(self, checker: str, step: int, stats: RunStats):
        super().__init__(f"checker {checker!r} failed after step {step}")
        self.checker = checker
        self.step = step
        self.stats = stats


class Simulation:
    """One run: a configuration, a snake rule and a schedule.

    Retired particles leave the activation pool.  A round ends once every
    particle that was live at its start has been activated or has retired.
    """

    def __init__(
        self,
        cfg: Configuration,
        rule: SnakeRule,
        schedule: Schedule | None = None,
        record_trace: bool = False,
        trace_noops: bool = False,
    ):
        self.cfg = cfg
        self.rule = rule
        self.schedule = schedule or Schedule()
        self.rng = random.Random(self.schedule.rng_seed)
        self.record_trace = record_trace
        self.trace_noops = trace_noops
        self.stats = RunStats()
        self.live: list[int] = [
            pid for pid, p in enumerate(cfg.particles) if p.state != State.RETIRED
        ]
        self._slot = {pid: i for i, pid in enumerate(self.live)}
        self._perms: Iterator[Sequence[int]] | None = (
            iter(self.schedule.permutations) if self.schedule.permutations is not None else None
        )
        self._queue: list[int] = []
        self._pending: set[int] = set()
        self._progress = False
        self._idle = 0
        self._start_round()
        self.stats.terminated = not self.live

    @property
    def terminated(self) -> bool:
        return not self.live

    def _start_round(self) -> None:
        self._pending = set(self.live)
        policy = self.schedule.policy
        if policy == Policy.ROUND_ROBIN:
            self._queue = sorted(self.live, reverse=True)
        elif policy == Policy.ADVERSARIAL:
            order: list[int] = []
            if self._perms is not None:
                try:
                    order = [pid for pid in next(self._perms) if pid in self._pending]
                except StopIteration:
                    self._perms = None
            if not order:
                order = sorted(self.live)
                self.rng.shuffle(order)
            # anything the stream forgot still gets its turn
            seen = set(order)
            order += [pid for pid in sorted(self.live) if pid not in seen]
            self._queue = order[::-1]

    def _drop_live(self, pid: int) -> None:
        i = self._slot.pop(pid)
        last = self.live.pop()
        if last != pid:
            self.live[i] = last
            self._slot[last] = i
        self._pending.discard(pid)

    def _choose(self) -> int:
        if self.schedule.policy == Policy.UNIFORM_RANDOM:
            return self.live[self.rng.randrange(len(self.live))]
        while True:
            pid = self._queue.pop()
            if pid in self._slot:
                return pid

    def apply_action(self, pid: int, action: Action) -> Action:
        cfg = self.cfg
        kind = action.kind
        try:
            if kind is Kind.NOOP:
                return action
            if kind is Kind.BECOME_ROOT:
                cfg.become_root(pid)
            elif kind is Kind.BECOME_FOLLOWER:
                cfg.become_follower(pid, action.port)
            elif kind is Kind.EXPAND:
                cfg.expand(pid, action.port)
                self.stats.expansions += 1
            elif kind is Kind.CONTRACT:
                cfg.contract(pid)
                self.stats.contractions += 1
            elif kind is Kind.HANDOVER_PUSH:
                qid = cfg.neighbor_id(pid, action.port)
                if qid is None:
                    raise MovementError("nobody to push")
                cfg.handover_push(pid, qid)
                self.stats.expansions += 1
                self.stats.contractions += 1
            elif kind is Kind.HANDOVER_PULL:
                qid = cfg.neighbor_id(pid, action.port, on_tail=True)
                if qid is None:
                    raise MovementError("nobody to pull")
                cfg.handover_pull(pid, qid)
                self.stats.expansions += 1
                self.stats.contractions += 1
            elif kind is Kind.RETIRE:
                cfg.retire(pid, dict(action.flags))
                self._drop_live(pid)
        except MovementError:
            # conflicting movement: abort, nothing changed
            return Action(Kind.NOOP)
        if action.moves:
            self.stats.movements = cfg.work
        else:
            self.stats.state_changes += 1
        return action

    def step(self) -> Event:
        stats = self.stats
        if not self.live:
            stats.terminated = True
            return Event(stats.activations, stats.rounds, -1, Action(Kind.NOOP), (), self.cfg.work)
        pid = self._choose()
        view = self.cfg.observe(pid)
        action = activate(view, self.rule)
        partner = None
        if action.kind is Kind.HANDOVER_PUSH:
            partner = self.cfg.neighbor_id(pid, action.port)
        elif action.kind is Kind.HANDOVER_PULL:
            partner = self.cfg.neighbor_id(pid, action.port, on_tail=True)
        applied = self.apply_action(pid, action)
        step = stats.activations
        stats.activations += 1
        if applied.kind is not Kind.NOOP:
            self._progress = True
        event = Event(step, stats.rounds, pid, applied, (), self.cfg.work)
        if applied.kind is not Kind.NOOP:
            nodes = self.cfg.particles[pid].nodes()
            if partner is not None:
                nodes += self.cfg.particles[partner].nodes()
            event.nodes = tuple(tuple(v) for v in nodes)
        if self.record_trace and (self.trace_noops or applied.kind is not Kind.NOOP):
            stats.events.append(event)

        self._pending.discard(pid)
        if not self._pending:
            stats.rounds += 1
            if self._progress:
                self._idle = 0
            else:
                self._idle += 1
                stats.max_idle_rounds = max(stats.max_idle_rounds, self._idle)
            self._progress = False
            if self.live:
                self._start_round()
        if not self.live:
            stats.terminated = True
        return event

    def run(self, max_rounds: int | None = None) -> RunStats:
        return self.run_with_checks(max_rounds, {})

    def run_with_checks(
        self,
        max_rounds: int | None,
        checkers: Mapping[str, Checker],
        observer: Callable[[Event, Configuration], None] | None = None,
    ) -> RunStats:
        """Run to termination; checkers are evaluated after every state-changing event."""
        if max_rounds is None:
            max_rounds = default_max_rounds(len(self.cfg))
        if max_rounds <= 0:
            raise ValueError(f"max_rounds must be positive, got {max_rounds}")
        stats = self.stats
        while self.live:
            if stats.rounds >= max_rounds:
                raise BudgetExhausted(stats, max_rounds)
            event = self.step()
            if event.action.kind is Kind.NOOP:
                continue
            for name, check in checkers.items():
                if not check(self.cfg):
                    raise InvariantViolation(name, event.step, stats)
            if observer is not None:
                observer(event, self.cfg)
        stats.terminated = True
        return stats

    def trace_lines(self) -> list[str]:
        return [e.to_json() for e in self.stats.events]


def default_max_rounds(n: int) -> int:
    return 50 * max(n, 1) ** 2
