"""Particles, configurations and the atomic movements of the amoebot model.

This is the only layer that sees global coordinates.  Decision logic gets a
:class:`NeighborView` from :meth:`Configuration.observe`, which carries what a
particle may legitimately sense: its own state and flags, and for every port
whether a neighbor is there, its state, whether it is expanded, which of its
nodes is adjacent, and the flags it keeps on the shared edge.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from amoebot.grid import (
    DIRECTIONS,
    Node,
    direction_between,
    global_to_local,
    local_to_global,
    opposite,
)


class State(enum.IntEnum):
    INACTIVE = 0
    FOLLOWER = 1
    ROOT = 2
    RETIRED = 3


# allowed (from, to) state changes
TRANSITIONS = frozenset(
    {
        (State.INACTIVE, State.FOLLOWER),
        (State.INACTIVE, State.ROOT),
        (State.FOLLOWER, State.ROOT),
        (State.ROOT, State.RETIRED),
    }
)


class EdgeFlag:
    """Bits of the per-port shared memory (plain ints; enum ops are too slow here)."""

    NONE = 0
    PARENT = 1
    SNAKEDIR = 2
    BORDER_LEFT = 4
    BORDER_RIGHT = 8

    NAMES = {PARENT: "parent", SNAKEDIR: "snakedir", BORDER_LEFT: "border_left", BORDER_RIGHT: "border_right"}

    @classmethod
    def describe(cls, bits: int) -> list[str]:
        return [name for bit, name in cls.NAMES.items() if bits & bit]


class MovementError(Exception):
    """A movement that the model does not allow in the current configuration."""


class TargetOccupied(MovementError):
    pass


class AlreadyExpanded(MovementError):
    pass


class NotExpanded(MovementError):
    pass


class NotAdjacentToTail(MovementError):
    pass


class WrongShapes(MovementError):
    pass


class IllegalTransition(Exception):
    pass


@dataclass(slots=True)
class Particle:
    state: State
    offset: int
    head: Node
    tail: Node
    is_seed: bool = False
    # flag bits per local port label of the head node
    flags: list[int] = field(default_factory=lambda: [0] * 6)
    moves: int = 0

    @property
    def expanded(self) -> bool:
        return self.head != self.tail

    @property
    def parent_label(self) -> int | None:
        for label, bits in enumerate(self.flags):
            if bits & EdgeFlag.PARENT:
                return label
        return None

    def port_dir(self, label: int) -> int:
        return (self.offset + label) % 6

    def nodes(self) -> tuple[Node, ...]:
        return (self.head,) if self.head == self.tail else (self.head, self.tail)


class PortView(NamedTuple):
    """What a particle senses through one port that has a neighbor behind it."""

    state: State
    expanded: bool
    at_tail: bool  # the adjacent node is the neighbor's tail
    flags: int  # neighbor's flags on the shared edge


class NeighborView(NamedTuple):
    state: State
    expanded: bool
    parent: int | None
    head: tuple[PortView | None, ...]
    # ports of the tail node, or None when contracted
    tail: tuple[PortView | None, ...] | None
    # label on the head pointing to the own tail (internal edge)
    tail_label: int | None


class Configuration:
    """Occupancy map plus particle records, mutated one atomic action at a time."""

    def __init__(self, particles: list[Particle], seed_id: int):
        self.particles = particles
        self.seed_id = seed_id
        self.occupancy: dict[Node, int] = {}
        self.work = 0
        for pid, p in enumerate(particles):
            for v in p.nodes():
                if v in self.occupancy:
                    raise ValueError(f"node {v} occupied twice")
                self.occupancy[v] = pid

    @classmethod
    def from_nodes(
        cls,
        nodes: Iterable[tuple[int, int]],
        seed: tuple[int, int],
        offsets: dict[tuple[int, int], int] | None = None,
        seed_flags: dict[int, int] | None = None,
    ) -> Configuration:
        """All particles contracted and inactive except the retired seed."""
        offsets = offsets or {}
        particles = []
        seed_id = -1
        for v in nodes:
            v = Node(*v)
            is_seed = v == tuple(seed)
            p = Particle(
                state=State.RETIRED if is_seed else State.INACTIVE,
                offset=offsets.get(v, 0) % 6,
                head=v,
                tail=v,
                is_seed=is_seed,
            )
            if is_seed:
                seed_id = len(particles)
                for label, bits in (seed_flags or {}).items():
                    p.flags[label] |= bits
            particles.append(p)
        if seed_id < 0:
            raise ValueError(f"seed node {seed} is not among the particle nodes")
        return cls(particles, seed_id)

    def copy(self) -> Configuration:
        clone = Configuration.__new__(Configuration)
        clone.particles = [
            Particle(p.state, p.offset, p.head, p.tail, p.is_seed, list(p.flags), p.moves)
            for p in self.particles
        ]
        clone.seed_id = self.seed_id
        clone.occupancy = dict(self.occupancy)
        clone.work = self.work
        return clone

    def __len__(self) -> int:
        return len(self.particles)

    @property
    def seed(self) -> Particle:
        return self.particles[self.seed_id]

    def particle_at(self, v: tuple[int, int]) -> Particle | None:
        pid = self.occupancy.get(v)
        return None if pid is None else self.particles[pid]

    def occupied_nodes(self) -> frozenset[Node]:
        return frozenset(self.occupancy)

    # -- state and flags ---------------------------------------------------

    def set_state(self, pid: int, state: State) -> None:
        p = self.particles[pid]
        if (p.state, state) not in TRANSITIONS:
            raise IllegalTransition(f"particle {pid}: {p.state.name} -> {state.name}")
        p.state = state

    def become_follower(self, pid: int, label: int) -> None:
        self.set_state(pid, State.FOLLOWER)
        self.particles[pid].flags[label] |= EdgeFlag.PARENT

    def become_root(self, pid: int) -> None:
        self.set_state(pid, State.ROOT)
        p = self.particles[pid]
        p.flags = [bits & ~EdgeFlag.PARENT for bits in p.flags]

    def retire(self, pid: int, flags: dict[int, int]) -> None:
        """State change and flag writes as one atomic step."""
        p = self.particles[pid]
        if p.expanded:
            raise WrongShapes(f"particle {pid} cannot retire while expanded")
        self.set_state(pid, State.RETIRED)
        for label, bits in flags.items():
            p.flags[label] |= bits

    def edge_flags(self, v: tuple[int, int], d: int) -> int:
        """Flags kept by the particle at ``v`` on its edge in global direction ``d``.

        Flags live on head ports only, so a tail node exposes none.
        """
        pid = self.occupancy.get(v)
        if pid is None:
            return 0
        p = self.particles[pid]
        if p.head != v:
            return 0
        return p.flags[(d - p.offset) % 6]

    def parent_node(self, pid: int) -> Node | None:
        p = self.particles[pid]
        label = p.parent_label
        if label is None:
            return None
        dq, dr = DIRECTIONS[p.port_dir(label)]
        return Node(p.head[0] + dq, p.head[1] + dr)

    def _repoint_parent(self, pid: int, parent_id: int) -> None:
        p = self.particles[pid]
        if p.state != State.FOLLOWER:
            return
        parent = self.particles[parent_id]
        for label in range(6):
            dq, dr = DIRECTIONS[p.port_dir(label)]
            if self.occupancy.get(Node(p.head[0] + dq, p.head[1] + dr)) == parent_id:
                p.flags = [bits & ~EdgeFlag.PARENT for bits in p.flags]
                p.flags[label] |= EdgeFlag.PARENT
                return
        raise WrongShapes(f"follower {pid} lost contact with parent at {parent.head}")

    # -- movements -------------------------------------------------------

    def expand(self, pid: int, label: int) -> None:
        p = self.particles[pid]
        if p.expanded:
            raise AlreadyExpanded(f"particle {pid} is already expanded")
        target = self._port_node(p.head, p.port_dir(label))
        if target in self.occupancy:
            raise TargetOccupied(f"node {target} is occupied")
        self.occupancy[target] = pid
        p.tail = p.head
        p.head = target
        p.moves += 1
        self.work += 1

    def contract(self, pid: int) -> None:
        """Contract out of the tail; the head is kept."""
        p = self.particles[pid]
        if not p.expanded:
            raise NotExpanded(f"particle {pid} is contracted")
        del self.occupancy[p.tail]
        p.tail = p.head
        p.moves += 1
        self.work += 1

    def handover_push(self, pid: int, qid: int) -> None:
        """Contracted ``pid`` expands into the tail of expanded ``qid``."""
        p, q = self.particles[pid], self.particles[qid]
        if p.expanded or not q.expanded:
            raise WrongShapes("push needs a contracted pusher and an expanded target")
        d = direction_between(p.head, q.tail)
        if d is None:
            raise NotAdjacentToTail(f"particle {pid} is not adjacent to the tail of {qid}")
        vacated = q.tail
        q.tail = q.head
        p.tail = p.head
        p.head = vacated
        self.occupancy[vacated] = pid
        p.moves += 1
        q.moves += 1
        self.work += 2
        self._repoint_parent(pid, qid)

    def handover_pull(self, pid: int, qid: int) -> None:
        """Expanded ``pid`` contracts while contracted ``qid`` expands into its tail."""
        p, q = self.particles[pid], self.particles[qid]
        if not p.expanded or q.expanded:
            raise WrongShapes("pull needs an expanded puller and a contracted target")
        d = direction_between(q.head, p.tail)
        if d is None:
            raise NotAdjacentToTail(f"particle {qid} is not adjacent to the tail of {pid}")
        vacated = p.tail
        p.tail = p.head
        q.tail = q.head
        q.head = vacated
        self.occupancy[vacated] = qid
        p.moves += 1
        q.moves += 1
        self.work += 2
        self._repoint_parent(qid, pid)

    @staticmethod
    def _port_node(v: Node, d: int) -> Node:
        dq, dr = DIRECTIONS[d]
        return Node(v[0] + dq, v[1] + dr)

    # -- sensing ---------------------------------------------------------

    def _ports(self, p: Particle, pid: int, v: Node) -> tuple[PortView | None, ...]:
        occ = self.occupancy
        parts = self.particles
        out: list[PortView | None] = []
        off = p.offset
        for label in range(6):
            d = (off + label) % 6
            dq, dr = DIRECTIONS[d]
            w = (v[0] + dq, v[1] + dr)
            qid = occ.get(w)
            if qid is None or qid == pid:
                out.append(None)
                continue
            q = parts[qid]
            at_tail = q.head != w
            bits = 0 if at_tail else q.flags[(d + 3 - q.offset) % 6]
            out.append(PortView(q.state, q.head != q.tail, at_tail, bits))
        return tuple(out)

    def observe(self, pid: int) -> NeighborView:
        p = self.particles[pid]
        head = self._ports(p, pid, p.head)
        if p.head == p.tail:
            return NeighborView(p.state, False, p.parent_label, head, None, None)
        d = direction_between(p.head, p.tail)
        tail = self._ports(p, pid, p.tail)
        return NeighborView(
            p.state, True, p.parent_label, head, tail, global_to_local(p.offset, d)
        )

    def neighbor_id(self, pid: int, label: int, on_tail: bool = False) -> int | None:
        """Resolve a port of ``pid`` to the particle behind it (harness bookkeeping)."""
        p = self.particles[pid]
        v = p.tail if on_tail else p.head
        qid = self.occupancy.get(self._port_node(v, p.port_dir(label)))
        return None if qid == pid else qid

    def children_of(self, pid: int) -> list[tuple[bool, int]]:
        """Ports ``(on_tail, label)`` whose neighbor is a follower pointing at ``pid``."""
        p = self.particles[pid]
        out = []
        for on_tail, v in ((False, p.head), (True, p.tail)):
            if on_tail and not p.expanded:
                break
            for label in range(6):
                d = local_to_global(p.offset, label)
                w = self._port_node(v, d)
                qid = self.occupancy.get(w)
                if qid is None or qid == pid:
                    continue
                if self.particles[qid].state != State.FOLLOWER:
                    continue
                if self.edge_flags(w, opposite(d)) & EdgeFlag.PARENT:
                    out.append((on_tail, label))
        return out

    def is_connected(self) -> bool:
        occ = self.occupancy
        if not occ:
            return True
        start = next(iter(occ))
        seen = {start}
        todo = deque([start])
        while todo:
            v = todo.popleft()
            for dq, dr in DIRECTIONS:
                w = (v[0] + dq, v[1] + dr)
                if w in occ and w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(occ)

    def is_consistent(self) -> bool:
        """Particle records and the occupancy map describe the same placement."""
        expected: dict[Node, int] = {}
        for pid, p in enumerate(self.particles):
            if p.expanded and direction_between(p.head, p.tail) is None:
                return False
            for v in p.nodes():
                if v in expected:
                    return False
                expected[v] = pid
        return expected == self.occupancy

    def translated(self, dq: int, dr: int) -> Configuration:
        clone = self.copy()
        for p in clone.particles:
            p.head = Node(p.head[0] + dq, p.head[1] + dr)
            p.tail = Node(p.tail[0] + dq, p.tail[1] + dr)
        clone.occupancy = {
            Node(v[0] + dq, v[1] + dr): pid for v, pid in self.occupancy.items()
        }
        return clone
