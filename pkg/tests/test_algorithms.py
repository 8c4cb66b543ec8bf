import inspect

import pytest
from hypothesis import assume, given, strategies as st

from amoebot.algorithms import (
    HEX,
    TRI,
    Action,
    BorderType,
    Kind,
    NoRetiredNeighbor,
    NonContiguousRetired,
    activate,
    border,
    root_direction,
    rule_for,
)
from amoebot.core import TRANSITIONS, Configuration, EdgeFlag, NeighborView, Node, PortView, State
from amoebot.grid import global_to_local, local_to_global

F = EdgeFlag


def port(state, expanded=False, at_tail=False, flags=0):
    return PortView(state, expanded, at_tail, flags)


def view(state, head=None, tail=None, parent=None, tail_label=None):
    head = head or {}
    ports = tuple(head.get(l) for l in range(6))
    tail_ports = None if tail is None else tuple(tail.get(l) for l in range(6))
    return NeighborView(state, tail is not None, parent, ports, tail_ports, tail_label)


RETIRED = port(State.RETIRED)


def real(nodes, seed, rule, offsets=None):
    return Configuration.from_nodes([Node(*v) for v in nodes], Node(*seed), offsets, rule.seed_init())


# -- spanning forest ---------------------------------------------------------


def test_inactive_next_to_seed_becomes_root():
    cfg = real([(0, 0), (1, 0), (2, 0)], (0, 0), HEX)
    assert activate(cfg.observe(cfg.occupancy[(1, 0)]), HEX) == Action(Kind.BECOME_ROOT)
    assert activate(cfg.observe(cfg.occupancy[(2, 0)]), HEX) == Action(Kind.NOOP)


def test_inactive_next_to_follower_follows_it():
    v = view(State.INACTIVE, {2: port(State.FOLLOWER), 4: port(State.INACTIVE)})
    assert activate(v, HEX) == Action(Kind.BECOME_FOLLOWER, 2)


def test_inactive_picks_smallest_label():
    v = view(State.INACTIVE, {5: port(State.ROOT), 1: port(State.FOLLOWER)})
    assert activate(v, HEX) == Action(Kind.BECOME_FOLLOWER, 1)


def test_expanded_follower_blocked_by_inactive_neighbor():
    v = view(State.FOLLOWER, {0: port(State.FOLLOWER), 1: port(State.INACTIVE)}, tail={}, parent=0, tail_label=3)
    assert activate(v, HEX) == Action(Kind.NOOP)


def test_expanded_follower_contracts_when_free():
    v = view(State.FOLLOWER, {0: port(State.FOLLOWER)}, tail={}, parent=0, tail_label=3)
    assert activate(v, HEX) == Action(Kind.CONTRACT)


def test_expanded_particle_pulls_contracted_tail_child():
    child = port(State.FOLLOWER, flags=F.PARENT)
    v = view(State.ROOT, {0: RETIRED}, tail={4: child, 5: child})
    assert activate(v, HEX) == Action(Kind.HANDOVER_PULL, 4)


def test_expanded_particle_waits_for_expanded_tail_child():
    child = port(State.FOLLOWER, expanded=True, flags=F.PARENT)
    v = view(State.ROOT, {0: RETIRED}, tail={4: child})
    assert activate(v, HEX) == Action(Kind.NOOP)


def test_children_on_head_do_not_block_contraction():
    child = port(State.FOLLOWER, flags=F.PARENT)
    v = view(State.ROOT, {0: RETIRED, 1: child}, tail={})
    assert activate(v, HEX) == Action(Kind.CONTRACT)


def test_contracted_follower_pushes_into_parent_tail():
    parent = port(State.ROOT, expanded=True, at_tail=True)
    v = view(State.FOLLOWER, {3: parent}, parent=3)
    assert activate(v, HEX) == Action(Kind.HANDOVER_PUSH, 3)
    head_side = port(State.ROOT, expanded=True, at_tail=False)
    assert activate(view(State.FOLLOWER, {3: head_side}, parent=3), HEX) == Action(Kind.NOOP)


def test_contracted_follower_next_to_retired_becomes_root():
    v = view(State.FOLLOWER, {3: port(State.ROOT, expanded=True, at_tail=True), 4: RETIRED}, parent=3)
    assert activate(v, HEX) == Action(Kind.BECOME_ROOT)


def test_retired_does_nothing():
    assert activate(view(State.RETIRED, {0: RETIRED}), HEX) == Action(Kind.NOOP)


def test_root_expands_along_root_direction_or_waits():
    v = view(State.ROOT, {2: RETIRED, 3: RETIRED})
    assert activate(v, HEX) == Action(Kind.EXPAND, 4)
    blocked = view(State.ROOT, {2: RETIRED, 3: RETIRED, 4: port(State.ROOT)})
    assert activate(blocked, HEX) == Action(Kind.NOOP)


# -- root direction ------------------------------------------------------------


def test_root_direction_examples():
    # hand trace: start at 2, 2 and 3 are retired, 4 is not
    assert root_direction(view(State.ROOT, {2: RETIRED, 3: RETIRED})) == 4
    assert root_direction(view(State.ROOT, {5: RETIRED})) == 0
    assert root_direction(view(State.ROOT, {5: RETIRED, 0: RETIRED, 4: port(State.ROOT)})) == 1


def test_root_direction_errors():
    with pytest.raises(NoRetiredNeighbor):
        root_direction(view(State.ROOT, {1: port(State.FOLLOWER)}))
    with pytest.raises(NonContiguousRetired):
        root_direction(view(State.ROOT, {l: RETIRED for l in range(6)}))
    with pytest.raises(NonContiguousRetired):
        root_direction(view(State.ROOT, {0: RETIRED, 2: RETIRED}))


@given(st.integers(0, 5), st.integers(1, 5), st.integers(0, 5))
def test_root_direction_rotates_with_labels(start, length, k):
    arc = {(start + j) % 6: RETIRED for j in range(length)}
    rotated = {(l + k) % 6: p for l, p in arc.items()}
    a = root_direction(view(State.ROOT, arc))
    assert a == (start + length) % 6
    assert root_direction(view(State.ROOT, rotated)) == (a + k) % 6


# -- HEX rule ------------------------------------------------------------------


def test_hex_seed_init():
    flags = HEX.seed_init()
    assert flags == {0: F.SNAKEDIR}
    assert not any(bits & (F.BORDER_LEFT | F.BORDER_RIGHT) for bits in flags.values())
    cfg = real([(0, 0)], (0, 0), HEX)
    assert cfg.seed.state == State.RETIRED


@pytest.mark.parametrize("offset", range(6))
def test_hex_second_particle_retires(offset):
    # seed's snake points east; from (1,0) the seed is at dir 3, and dir 4 is free
    cfg = real([(0, 0), (1, 0)], (0, 0), HEX, offsets={(1, 0): offset})
    pid = cfg.occupancy[(1, 0)]
    cfg.become_root(pid)
    action = activate(cfg.observe(pid), HEX)
    assert action == Action(Kind.RETIRE, flags=((global_to_local(offset, 4), F.SNAKEDIR),))


def test_hex_no_snakedir_no_retire():
    cfg = real([(0, 0), (0, 1)], (0, 0), HEX)
    pid = cfg.occupancy[(0, 1)]
    cfg.become_root(pid)
    assert HEX.retire_check(cfg.observe(pid)) is None
    assert activate(cfg.observe(pid), HEX).kind is Kind.EXPAND


def test_hex_expanded_root_does_not_retire():
    v = view(State.ROOT, {3: port(State.RETIRED, flags=F.SNAKEDIR)}, tail={})
    assert HEX.retire_check(v) is None


def test_hex_retire_skips_all_retired_ports():
    v = view(State.ROOT, {1: port(State.RETIRED, flags=F.SNAKEDIR), 2: RETIRED, 3: RETIRED})
    assert HEX.retire_check(v) == Action(Kind.RETIRE, flags=((4, F.SNAKEDIR),))


# -- TRI rule ------------------------------------------------------------------


def test_tri_seed_init():
    assert TRI.seed_init() == {0: F.SNAKEDIR | F.BORDER_LEFT, 1: F.BORDER_RIGHT}


def test_border():
    assert border(view(State.ROOT, {2: port(State.RETIRED, flags=F.BORDER_LEFT)})) == (BorderType.LEFT, 2)
    assert border(view(State.ROOT, {2: port(State.RETIRED, flags=F.BORDER_RIGHT)})) == (BorderType.RIGHT, 2)
    assert border(view(State.ROOT, {2: RETIRED})) == (None, None)
    both = view(State.ROOT, {1: port(State.RETIRED, flags=F.BORDER_RIGHT),
                             4: port(State.RETIRED, flags=F.BORDER_LEFT)})
    assert border(both) == (BorderType.RIGHT, 1)
    assert border(both, prefer=4) == (BorderType.LEFT, 4)


def test_border_ignores_non_retired():
    assert border(view(State.ROOT, {2: port(State.ROOT, flags=F.BORDER_LEFT)})) == (None, None)


@pytest.mark.parametrize("offset", range(6))
def test_tri_second_particle_case3(offset):
    cfg = real([(0, 0), (1, 0)], (0, 0), TRI, offsets={(1, 0): offset})
    pid = cfg.occupancy[(1, 0)]
    cfg.become_root(pid)
    action = TRI.retire_check(cfg.observe(pid))
    i = global_to_local(offset, 3)  # port to the seed
    expected = {
        global_to_local(offset, 0): F.BORDER_LEFT,
        (i + 5) % 6: F.SNAKEDIR,
    }
    assert action == Action(Kind.RETIRE, flags=tuple(sorted(expected.items())))
    # in global terms: border continues east, snake turns to (0, 1)
    assert local_to_global(offset, (i + 5) % 6) == 2


def test_tri_case1_goes_straight():
    v = view(State.ROOT, {2: port(State.RETIRED, flags=F.SNAKEDIR), 3: RETIRED, 4: RETIRED})
    assert TRI.retire_check(v) == Action(Kind.RETIRE, flags=((5, F.SNAKEDIR),))


def test_tri_case2_starts_new_layer():
    v = view(State.ROOT, {5: port(State.RETIRED, flags=F.SNAKEDIR),
                          4: port(State.RETIRED, flags=F.BORDER_RIGHT)})
    assert TRI.retire_check(v) == Action(Kind.RETIRE, flags=((1, F.BORDER_RIGHT | F.SNAKEDIR),))


def test_tri_case3_right_turn():
    v = view(State.ROOT, {4: port(State.RETIRED, flags=F.SNAKEDIR | F.BORDER_RIGHT), 5: RETIRED})
    assert TRI.retire_check(v) == Action(Kind.RETIRE, flags=((1, F.BORDER_RIGHT), (5, F.SNAKEDIR)))


# -- general properties ------------------------------------------------------------

port_strategy = st.one_of(
    st.none(),
    st.builds(
        PortView,
        st.sampled_from(list(State)),
        st.booleans(),
        st.booleans(),
        st.integers(0, 15),
    ),
)
ports6 = st.tuples(*[port_strategy] * 6)


@st.composite
def views(draw):
    state = draw(st.sampled_from(list(State)))
    expanded = draw(st.booleans()) and state in (State.FOLLOWER, State.ROOT)
    head = list(draw(ports6))
    tail = None
    tail_label = None
    if expanded:
        tail_label = draw(st.integers(0, 5))
        head[tail_label] = None
        tail = list(draw(ports6))
        tail[(tail_label + 3) % 6] = None
        tail = tuple(tail)
    parent = None
    if state == State.FOLLOWER:
        parent = draw(st.sampled_from([l for l in range(6) if l != tail_label]))
        if head[parent] is None:
            head[parent] = PortView(State.ROOT, False, False, 0)
    return NeighborView(state, expanded, parent, tuple(head), tail, tail_label)


@given(views())
def test_activate_respects_state_order_and_is_pure(v):
    try:
        action = activate(v, TRI)
    except (NoRetiredNeighbor, NonContiguousRetired):
        assume(False)
    assert activate(v, TRI) == action
    new_state = {
        Kind.BECOME_FOLLOWER: State.FOLLOWER,
        Kind.BECOME_ROOT: State.ROOT,
        Kind.RETIRE: State.RETIRED,
    }.get(action.kind)
    if new_state is not None:
        assert (v.state, new_state) in TRANSITIONS
    if action.kind is Kind.EXPAND:
        assert not v.expanded and v.state == State.ROOT
    if action.kind in (Kind.CONTRACT, Kind.HANDOVER_PULL):
        assert v.expanded
    if action.kind is Kind.HANDOVER_PUSH:
        assert not v.expanded and v.state == State.FOLLOWER


def test_activate_only_takes_a_view_and_a_rule():
    assert list(inspect.signature(activate).parameters) == ["view", "rule"]


def test_rule_lookup():
    assert rule_for("HEX") is HEX and rule_for("tri") is TRI
    with pytest.raises(ValueError):
        rule_for("square")
