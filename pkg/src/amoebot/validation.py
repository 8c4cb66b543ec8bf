"""Checkers for run invariants, goal shapes and work lower bounds.

Everything here is exact integer arithmetic over configuration snapshots.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from amoebot.core import Configuration, EdgeFlag, Node, State
from amoebot.grid import DIRECTIONS, local_to_global, neighbor, ring_nodes


class NotTerminated(ValueError):
    pass


@dataclass
class ShapeReport:
    valid: bool
    radius_or_side: int = 0
    complete_layers: int = 0
    partial_layer_size: int = 0
    failure_reason: str = ""


# -- run invariants ---------------------------------------------------------


def forest_edges(cfg: Configuration) -> dict[Node, Node]:
    """Out-edge of every node in the tail->head / head->parent graph."""
    out: dict[Node, Node] = {}
    for pid, p in enumerate(cfg.particles):
        if p.expanded:
            out[p.tail] = p.head
        if p.state == State.FOLLOWER:
            parent = cfg.parent_node(pid)
            if parent is not None:
                out[p.head] = parent
    return out


def _acyclic(out: dict[Node, Node]) -> bool:
    # every node has out-degree <= 1, so an undirected cycle is a directed one
    done: set[Node] = set()
    for start in out:
        path: set[Node] = set()
        v = start
        while v in out and v not in done:
            if v in path:
                return False
            path.add(v)
            v = out[v]
        done |= path
    return True


def forest_check(cfg: Configuration) -> bool:
    """The movement graph is a forest and no inactive cluster is stranded.

    The second part: while some particle is active, each connected cluster of
    inactive particles touches a particle that is active or retired.
    """
    out = forest_edges(cfg)
    if any(v not in cfg.occupancy or w not in cfg.occupancy for v, w in out.items()):
        return False
    if not _acyclic(out):
        return False
    parts = cfg.particles
    if not any(p.state in (State.FOLLOWER, State.ROOT) for p in parts):
        return True
    occ = cfg.occupancy
    seen: set[Node] = set()
    for v, pid in occ.items():
        if parts[pid].state != State.INACTIVE or v in seen:
            continue
        touches = False
        todo = deque([v])
        seen.add(v)
        while todo:
            u = todo.popleft()
            for dq, dr in DIRECTIONS:
                w = (u[0] + dq, u[1] + dr)
                qid = occ.get(w)
                if qid is None:
                    continue
                if parts[qid].state == State.INACTIVE:
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
                else:
                    touches = True
        if not touches:
            return False
    return True


def follower_parent_check(cfg: Configuration, strict: bool = False) -> bool:
    """Every follower's parent port leads to a follower or root.

    A parent that retires leaves its children pointing at a retired particle
    until they are next activated and promote themselves; that is accepted
    unless ``strict`` is set.
    """
    ok = {State.FOLLOWER, State.ROOT} if strict else {State.FOLLOWER, State.ROOT, State.RETIRED}
    for pid, p in enumerate(cfg.particles):
        if p.state != State.FOLLOWER:
            continue
        labels = [l for l in range(6) if p.flags[l] & EdgeFlag.PARENT]
        if len(labels) != 1:
            return False
        target = cfg.particle_at(cfg.parent_node(pid))
        if target is None or target.state not in ok:
            return False
    return True


def flags_only_on_followers_and_retired(cfg: Configuration) -> bool:
    for p in cfg.particles:
        has_parent = any(bits & EdgeFlag.PARENT for bits in p.flags)
        if has_parent != (p.state == State.FOLLOWER):
            return False
        if p.state != State.RETIRED and any(bits & ~EdgeFlag.PARENT for bits in p.flags):
            return False
    return True


class RetiredStayPut:
    """Stateful checker: once retired, a particle's node never changes."""

    def __init__(self) -> None:
        self.pinned: dict[int, tuple[Node, Node]] = {}

    def __call__(self, cfg: Configuration) -> bool:
        for pid, p in enumerate(cfg.particles):
            if p.state != State.RETIRED:
                continue
            where = (p.head, p.tail)
            if self.pinned.setdefault(pid, where) != where:
                return False
        return True


def default_checkers() -> dict:
    return {
        "connectivity": Configuration.is_connected,
        "occupancy": Configuration.is_consistent,
        "forest": forest_check,
        "follower_parent": follower_parent_check,
        "flags": flags_only_on_followers_and_retired,
        "retired_static": RetiredStayPut(),
    }


# -- goal shapes --------------------------------------------------------------


def _require_terminated(cfg: Configuration) -> None:
    for p in cfg.particles:
        if p.state != State.RETIRED or p.expanded:
            raise NotTerminated("shape validation needs every particle retired and contracted")


def _contiguous_cyclic(mask: list[bool]) -> bool:
    k = len(mask)
    starts = sum(1 for i in range(k) if mask[i] and not mask[i - 1])
    return starts <= 1 or all(mask)


def hexagon_report(nodes: set, center: tuple[int, int]) -> ShapeReport:
    n = len(nodes)
    if tuple(center) not in nodes:
        return ShapeReport(False, failure_reason="seed node not occupied")
    r = 0
    while all(v in nodes for v in ring_nodes(center, r + 1)):
        r += 1
    full = 1 + 3 * r * (r + 1)
    ring = ring_nodes(center, r + 1)
    mask = [v in nodes for v in ring]
    partial = sum(mask)
    if full + partial != n:
        return ShapeReport(False, r, r, partial, "particles outside the disk and its next ring")
    if not _contiguous_cyclic(mask):
        return ShapeReport(False, r, r, partial, "outer layer is not a contiguous arc")
    return ShapeReport(True, r, r, partial)


def validate_hexagon(cfg: Configuration) -> ShapeReport:
    _require_terminated(cfg)
    return hexagon_report(set(cfg.occupancy), cfg.seed.head)


def triangle_borders(cfg: Configuration) -> tuple[int, int]:
    """Global directions of the left and right borders flagged by the seed."""
    seed = cfg.seed
    left = right = None
    for label, bits in enumerate(seed.flags):
        if bits & EdgeFlag.BORDER_LEFT:
            left = local_to_global(seed.offset, label)
        if bits & EdgeFlag.BORDER_RIGHT:
            right = local_to_global(seed.offset, label)
    if left is None or right is None:
        raise ValueError("seed carries no border flags")
    return left, right


def triangle_row(corner, left: int, right: int, k: int) -> list[Node]:
    """Row ``k`` (1-based) ordered from the left border to the right border."""
    out = []
    for b in range(k):
        v = Node(*corner)
        for _ in range(k - 1 - b):
            v = neighbor(v, left)
        for _ in range(b):
            v = neighbor(v, right)
        out.append(v)
    return out


def triangle_report(nodes: set, corner, left: int, right: int) -> ShapeReport:
    n = len(nodes)
    if tuple(corner) not in nodes:
        return ShapeReport(False, failure_reason="seed node not occupied")
    s = 1
    while all(v in nodes for v in triangle_row(corner, left, right, s + 1)):
        s += 1
    row = triangle_row(corner, left, right, s + 1)
    mask = [v in nodes for v in row]
    partial = sum(mask)
    if s * (s + 1) // 2 + partial != n:
        return ShapeReport(False, s, s, partial, "particles outside the triangle and its next row")
    if partial:
        anchored_left = all(mask[:partial])
        anchored_right = all(mask[len(mask) - partial:])
        if not (anchored_left or anchored_right):
            return ShapeReport(False, s, s, partial, "partial row is not anchored at a border")
    return ShapeReport(True, s, s, partial)


def validate_triangle(cfg: Configuration) -> ShapeReport:
    _require_terminated(cfg)
    left, right = triangle_borders(cfg)
    return triangle_report(set(cfg.occupancy), cfg.seed.head, left, right)


def validate_shape(cfg: Configuration, algorithm: str) -> ShapeReport:
    if algorithm == "hex":
        return validate_hexagon(cfg)
    if algorithm == "tri":
        return validate_triangle(cfg)
    raise ValueError(f"unknown algorithm {algorithm!r}")


# -- work lower bounds ----------------------------------------------------------


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def hex_lower_bound(n: int) -> int:
    """Movements any algorithm needs to turn a line (seed at one end) into a hexagon."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return 2 * sum(i - 1 - _ceil_div(i - 1, 6) for i in range(2, n))


def tri_lower_bound(n: int) -> int:
    if n < 1:
        raise ValueError("n must be at least 1")
    return 2 * sum(i - 1 - _ceil_div(i - 1, 2) for i in range(1, n))


def lower_bound(algorithm: str, n: int) -> int:
    return {"hex": hex_lower_bound, "tri": tri_lower_bound}[algorithm](n)

