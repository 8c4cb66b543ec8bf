"""Particle-local decision logic.

:func:`activate` implements the spanning-forest behaviour shared by every
shape.  What differs between shapes is only where the snake grows next, which
a :class:`SnakeRule` decides: the flags the seed starts with and whether a
contracted root may retire at its current node.  Everything here works on a
:class:`~amoebot.core.NeighborView` and local port labels; there are no
coordinates, identifiers or particle counts in scope.
"""

from __future__ import annotations

import abc
import enum
from typing import NamedTuple

from amoebot.core import EdgeFlag, NeighborView, PortView, State


class Kind(enum.Enum):
    NOOP = "noop"
    BECOME_FOLLOWER = "become_follower"
    BECOME_ROOT = "become_root"
    EXPAND = "expand"
    CONTRACT = "contract"
    HANDOVER_PUSH = "handover_push"
    HANDOVER_PULL = "handover_pull"
    RETIRE = "retire"


class Action(NamedTuple):
    kind: Kind
    # BECOME_FOLLOWER / EXPAND / HANDOVER_PUSH: head label.  HANDOVER_PULL: tail label.
    port: int | None = None
    # RETIRE: sorted (label, flag bits) pairs
    flags: tuple[tuple[int, int], ...] = ()

    @property
    def moves(self) -> bool:
        return self.kind in _MOVES


_MOVES = frozenset({Kind.EXPAND, Kind.CONTRACT, Kind.HANDOVER_PUSH, Kind.HANDOVER_PULL})

NOOP = Action(Kind.NOOP)
BECOME_ROOT = Action(Kind.BECOME_ROOT)
CONTRACT = Action(Kind.CONTRACT)


def retire(flags: dict[int, int]) -> Action:
    return Action(Kind.RETIRE, flags=tuple(sorted((k, int(v)) for k, v in flags.items())))


class BorderType(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class NoRetiredNeighbor(RuntimeError):
    pass


class NonContiguousRetired(RuntimeError):
    """Retired neighbors of a root form more than one arc, so the scan start matters."""


def _retired(port: PortView | None) -> bool:
    return port is not None and port.state == State.RETIRED


def _active(port: PortView | None) -> bool:
    return port is not None and (port.state == State.FOLLOWER or port.state == State.ROOT)


def _inactive(port: PortView | None) -> bool:
    return port is not None and port.state == State.INACTIVE


def retired_condition(view: NeighborView) -> int | None:
    """Port of a retired neighbor whose snake flag sits on the shared edge."""
    for label, port in enumerate(view.head):
        if _retired(port) and port.flags & EdgeFlag.SNAKEDIR:
            return label
    return None


def skip_retired(view: NeighborView, label: int) -> int:
    """Rotate ``label`` clockwise until it no longer points at a retired particle."""
    for _ in range(6):
        if not _retired(view.head[label]):
            return label
        label = (label + 1) % 6
    raise NonContiguousRetired("every port points at a retired particle")


def root_direction(view: NeighborView) -> int:
    retired = [_retired(port) for port in view.head]
    if not any(retired):
        raise NoRetiredNeighbor("root has no retired neighbor")
    arcs = sum(1 for i in range(6) if retired[i] and not retired[(i + 1) % 6])
    if arcs != 1:
        raise NonContiguousRetired(f"retired ports {retired} do not form a single arc")
    return skip_retired(view, retired.index(True))


class SnakeRule(abc.ABC):
    """Extension point for shapes: where the snake starts and how it continues."""

    name: str

    @abc.abstractmethod
    def seed_init(self) -> dict[int, int]:
        """Flag bits per local port label that the seed holds from the start."""

    @abc.abstractmethod
    def retire_check(self, view: NeighborView) -> Action | None:
        """A RETIRE action if the particle sits on the next snake position."""


class HexRule(SnakeRule):
    name = "hex"

    def seed_init(self) -> dict[int, int]:
        return {0: EdgeFlag.SNAKEDIR}

    def retire_check(self, view: NeighborView) -> Action | None:
        if view.state != State.ROOT or view.expanded:
            return None
        i = retired_condition(view)
        if i is None:
            return None
        return retire({skip_retired(view, i): EdgeFlag.SNAKEDIR})


def border(view: NeighborView, prefer: int | None = None) -> tuple[BorderType | None, int | None]:
    """Border type seen on a shared edge and the port it was seen on.

    If several ports carry border flags the one at ``prefer`` wins, else the
    smallest label.
    """
    seen = []
    for label, port in enumerate(view.head):
        if not _retired(port):
            continue
        if port.flags & EdgeFlag.BORDER_LEFT:
            seen.append((label, BorderType.LEFT))
        elif port.flags & EdgeFlag.BORDER_RIGHT:
            seen.append((label, BorderType.RIGHT))
    if not seen:
        return None, None
    for label, kind in seen:
        if label == prefer:
            return kind, label
    label, kind = seen[0]
    return kind, label


class TriRule(SnakeRule):
    name = "tri"

    def seed_init(self) -> dict[int, int]:
        return {
            0: EdgeFlag.SNAKEDIR | EdgeFlag.BORDER_LEFT,
            1: EdgeFlag.BORDER_RIGHT,
        }

    def retire_check(self, view: NeighborView) -> Action | None:
        if view.state != State.ROOT or view.expanded:
            return None
        i = retired_condition(view)
        if i is None:
            return None
        kind, k = border(view, prefer=i)
        if kind is None:
            # same layer: straight through
            return retire({(i + 3) % 6: EdgeFlag.SNAKEDIR})
        j = (k + 3) % 6
        flags = {j: EdgeFlag.BORDER_LEFT if kind is BorderType.LEFT else EdgeFlag.BORDER_RIGHT}
        if k != i:
            # touched the border: next layer starts behind us
            flags[j] |= EdgeFlag.SNAKEDIR
        else:
            # first particle of a layer: turn back along it
            turn = (i + 5) % 6 if kind is BorderType.LEFT else (i + 1) % 6
            flags[turn] = flags.get(turn, 0) | EdgeFlag.SNAKEDIR
        return retire(flags)


HEX = HexRule()
TRI = TriRule()

RULES: dict[str, SnakeRule] = {HEX.name: HEX, TRI.name: TRI}


def rule_for(name: str) -> SnakeRule:
    try:
        return RULES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; expected one of {sorted(RULES)}") from None


def _expanded_step(view: NeighborView) -> Action:
    # children hanging on the tail must be handed over first; children on the
    # head stay connected whatever we do
    waiting = False
    for label, port in enumerate(view.tail):
        if port is not None and port.state == State.FOLLOWER and port.flags & EdgeFlag.PARENT:
            if not port.expanded:
                return Action(Kind.HANDOVER_PULL, label)
            waiting = True
    if waiting:
        return NOOP
    if any(_inactive(port) for port in view.head) or any(_inactive(port) for port in view.tail):
        return NOOP
    return CONTRACT


def activate(view: NeighborView, rule: SnakeRule) -> Action:
    state = view.state
    if state == State.RETIRED:
        return NOOP

    if state == State.INACTIVE:
        if any(_retired(port) for port in view.head):
            return BECOME_ROOT
        for label, port in enumerate(view.head):
            if _active(port):
                return Action(Kind.BECOME_FOLLOWER, label)
        return NOOP

    if state == State.FOLLOWER:
        if view.expanded:
            return _expanded_step(view)
        if any(_retired(port) for port in view.head):
            return BECOME_ROOT
        parent = view.head[view.parent]
        if parent is not None and parent.expanded and parent.at_tail:
            return Action(Kind.HANDOVER_PUSH, view.parent)
        return NOOP

    # root
    if view.expanded:
        return _expanded_step(view)
    action = rule.retire_check(view)
    if action is not None:
        return action
    label = root_direction(view)
    if view.head[label] is not None:
        return NOOP
    return Action(Kind.EXPAND, label)
