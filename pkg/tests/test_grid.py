from collections import deque

import pytest
from hypothesis import given, strategies as st

from amoebot.grid import (
    DIRECTIONS,
    Node,
    distance,
    global_to_local,
    local_to_global,
    neighbor,
    next_clockwise,
    opposite,
    ring_nodes,
)

coords = st.integers(min_value=-10**6, max_value=10**6)
nodes = st.builds(Node, coords, coords)
dirs = st.integers(min_value=0, max_value=5)


def bfs_distances(origin, radius):
    """Graph distances from adjacency alone (no closed form)."""
    dist = {origin: 0}
    todo = deque([origin])
    while todo:
        v = todo.popleft()
        if dist[v] == radius:
            continue
        for dq, dr in DIRECTIONS:
            w = (v[0] + dq, v[1] + dr)
            if w not in dist:
                dist[w] = dist[v] + 1
                todo.append(w)
    return dist


BFS = bfs_distances((0, 0), 10)


def test_neighbor_examples():
    assert neighbor((0, 0), 0) == (1, 0)
    assert neighbor((0, 0), 3) == (-1, 0)
    v = neighbor((2, -1), 1)
    assert v == (2 + DIRECTIONS[1][0], -1 + DIRECTIONS[1][1])
    # the oracle agrees that it is adjacent
    assert bfs_distances((2, -1), 1)[v] == 1


def test_opposite_and_clockwise():
    assert opposite(0) == 3
    assert opposite(5) == 2
    assert next_clockwise(0) == 1
    assert next_clockwise(5) == 0
    for d in range(6):
        assert opposite(opposite(d)) == d
        e = d
        for _ in range(6):
            e = next_clockwise(e)
        assert e == d


def test_direction_basis_pairs_cancel():
    for d in range(6):
        a, b = DIRECTIONS[d], DIRECTIONS[opposite(d)]
        assert (a[0] + b[0], a[1] + b[1]) == (0, 0)
    assert len(set(DIRECTIONS)) == 6


def test_consecutive_directions_are_60_degrees_clockwise():
    import math

    from amoebot.grid import to_cartesian

    for d in range(6):
        x1, y1 = to_cartesian(DIRECTIONS[d])
        x2, y2 = to_cartesian(DIRECTIONS[next_clockwise(d)])
        assert math.isclose(x1 * x2 + y1 * y2, 0.5, abs_tol=1e-12)
        # screen space (y down): positive cross product is a clockwise turn
        assert x1 * y2 - y1 * x2 > 0


@given(nodes, dirs)
def test_neighbor_then_back(v, d):
    assert neighbor(neighbor(v, d), opposite(d)) == v


@given(nodes)
def test_six_distinct_neighbors(v):
    assert len({neighbor(v, d) for d in range(6)}) == 6


def test_distance_examples():
    assert distance((0, 0), (0, 0)) == 0
    assert distance((0, 0), (1, 0)) == 1
    assert distance((0, 0), (2, -1)) == BFS[(2, -1)] == 2


def test_distance_matches_bfs_within_radius_8():
    ball = [v for v, k in BFS.items() if k <= 8]
    for a in ball[::7]:
        ref = bfs_distances(a, 16)
        for b in ball:
            assert distance(a, b) == ref[b]


def test_ring_sizes_match_bfs():
    for k in range(0, 11):
        count = sum(1 for dist in BFS.values() if dist == k)
        assert count == (1 if k == 0 else 6 * k)
    assert len(ring_nodes((5, -2), 3)) == sum(1 for dist in BFS.values() if dist == 3) == 18


@pytest.mark.parametrize("k", [1, 2, 3, 7])
def test_ring_nodes_is_a_clockwise_walk(k):
    c = (3, -4)
    ring = ring_nodes(c, k)
    assert len(ring) == 6 * k == len(set(ring))
    assert all(distance(c, v) == k for v in ring)
    for a, b in zip(ring, ring[1:] + ring[:1]):
        assert distance(a, b) == 1


def test_ring_rejects_zero():
    with pytest.raises(ValueError):
        ring_nodes((0, 0), 0)


def test_label_mapping():
    assert local_to_global(0, 2) == 2
    assert local_to_global(4, 3) == 1
    for offset in range(6):
        assert sorted(local_to_global(offset, l) for l in range(6)) == list(range(6))
        for label in range(6):
            assert global_to_local(offset, local_to_global(offset, label)) == label
            # consecutive labels stay consecutive clockwise
            assert local_to_global(offset, (label + 1) % 6) == next_clockwise(
                local_to_global(offset, label)
            )


@given(nodes, nodes)
def test_distance_is_translation_invariant_and_symmetric(a, b):
    assert distance(a, b) == distance(b, a)
    assert distance(a, b) == distance((a.q - b.q, a.r - b.r), (0, 0))
