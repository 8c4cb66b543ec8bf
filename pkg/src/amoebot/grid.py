"""Geometry of the infinite triangular grid in axial coordinates.

Directions are indexed 0..5 in clockwise order.  With the embedding
``x = q + r/2, y = -(sqrt(3)/2) r`` (y pointing up) direction 0 points east
and each increment turns by 60 degrees clockwise.  Particles label their
ports clockwise as well, shifted by a per-particle offset.
"""

from __future__ import annotations

import math
from typing import NamedTuple

DIRECTIONS: tuple[tuple[int, int], ...] = (
    (1, 0),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (0, -1),
    (1, -1),
)


class Node(NamedTuple):
    q: int
    r: int


def neighbor(v: tuple[int, int], d: int) -> Node:
    dq, dr = DIRECTIONS[d]
    return Node(v[0] + dq, v[1] + dr)


def neighbors(v: tuple[int, int]) -> list[Node]:
    return [Node(v[0] + dq, v[1] + dr) for dq, dr in DIRECTIONS]


def opposite(d: int) -> int:
    return (d + 3) % 6


def next_clockwise(d: int) -> int:
    return (d + 1) % 6


def direction_between(a: tuple[int, int], b: tuple[int, int]) -> int | None:
    """Direction ``d`` with ``neighbor(a, d) == b``, or None if not adjacent."""
    delta = (b[0] - a[0], b[1] - a[1])
    try:
        return DIRECTIONS.index(delta)
    except ValueError:
        return None


def distance(a: tuple[int, int], b: tuple[int, int]) -> int:
    dq = a[0] - b[0]
    dr = a[1] - b[1]
    return (abs(dq) + abs(dr) + abs(dq + dr)) // 2


def local_to_global(offset: int, label: int) -> int:
    return (offset + label) % 6


def global_to_local(offset: int, d: int) -> int:
    return (d - offset) % 6


def ring_nodes(center: tuple[int, int], k: int) -> list[Node]:
    """The ``6k`` nodes at distance exactly ``k`` from ``center``.

    The walk starts at ``center + k * dir0`` and proceeds clockwise.
    """
    if k < 1:
        raise ValueError(f"ring radius must be positive, got {k}")
    dq0, dr0 = DIRECTIONS[0]
    v = Node(center[0] + k * dq0, center[1] + k * dr0)
    out = []
    for side in range(6):
        step = (side + 2) % 6
        for _ in range(k):
            out.append(v)
            v = neighbor(v, step)
    return out


def disk_nodes(center: tuple[int, int], k: int) -> list[Node]:
    out = [Node(*center)]
    for j in range(1, k + 1):
        out.extend(ring_nodes(center, j))
    return out


def to_cartesian(v: tuple[int, int]) -> tuple[float, float]:
    """Planar position with unit edge length, y pointing down (screen space)."""
    return v[0] + v[1] / 2.0, v[1] * math.sqrt(3) / 2.0
