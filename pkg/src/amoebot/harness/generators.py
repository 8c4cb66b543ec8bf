"""Initial connected configurations."""

from __future__ import annotations

import random
from dataclasses import dataclass

from amoebot.algorithms import SnakeRule
from amoebot.core import Configuration
from amoebot.grid import Node, neighbors


@dataclass(frozen=True)
class InitialConfig:
    nodes: tuple[Node, ...]
    seed: Node
    generator: str
    generator_seed: int | None = None

    @property
    def n(self) -> int:
        return len(self.nodes)

    def offsets(self, offset_seed: int | None, seed_offset: int = 0) -> dict[Node, int]:
        """Label offsets: fixed for the seed, drawn per particle for the others.

        ``offset_seed=None`` gives every particle offset 0.
        """
        rng = random.Random(offset_seed)
        out = {}
        for v in self.nodes:
            if v == self.seed:
                out[v] = seed_offset % 6
            else:
                out[v] = 0 if offset_seed is None else rng.randrange(6)
        return out

    def build(
        self, rule: SnakeRule, offset_seed: int | None = None, seed_offset: int = 0
    ) -> Configuration:
        return Configuration.from_nodes(
            self.nodes,
            self.seed,
            offsets=self.offsets(offset_seed, seed_offset),
            seed_flags=rule.seed_init(),
        )


def gen_line(n: int) -> InitialConfig:
    """``n`` particles along direction 0 with the seed at the end (0, 0)."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return InitialConfig(tuple(Node(i, 0) for i in range(n)), Node(0, 0), "line")


def gen_random_connected(n: int, seed: int) -> InitialConfig:
    """Grow from the seed node, adding a uniformly random frontier node each time."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = random.Random(seed)
    origin = Node(0, 0)
    nodes = [origin]
    taken = {origin}
    frontier: list[Node] = []
    in_frontier: set[Node] = set()

    def push_frontier(v: Node) -> None:
        for w in neighbors(v):
            if w not in taken and w not in in_frontier:
                in_frontier.add(w)
                frontier.append(w)

    push_frontier(origin)
    while len(nodes) < n:
        i = rng.randrange(len(frontier))
        v = frontier[i]
        frontier[i] = frontier[-1]
        frontier.pop()
        in_frontier.discard(v)
        taken.add(v)
        nodes.append(v)
        push_frontier(v)
    return InitialConfig(tuple(nodes), origin, "random", seed)


def make_initial(init: str, n: int, init_seed: int = 0) -> InitialConfig:
    if init == "line":
        return gen_line(n)
    if init == "random":
        return gen_random_connected(n, init_seed)
    raise ValueError(f"unknown generator {init!r}")
