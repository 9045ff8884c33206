"""The n-partite best-response graph and game classification.

Nodes are (player, environment) pairs with id ``player * m**(n-1) + env_rank``.
In a game's functional graph each node has exactly one successor: the
environment the next player in the turn order faces once the current player
has played their best response.  A PSNE is a cycle of length ``n``; a game
converges under clockwork dynamics iff every cycle has length ``n``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from .game import (
    BestResponseMap,
    Environment,
    Game,
    GameError,
    env_rank,
    env_unrank,
    fast_best_response_map,
)

MAX_FULL_GRAPH_NODES = 1 << 20


class SizeGuardError(ValueError):
    """Raised when a requested object would exceed a configured size limit."""


class InvalidOrderError(GameError):
    pass


class GameType(str, enum.Enum):
    A = "A"  # convergent, unique PSNE
    B = "B"  # convergent, several PSNEs
    C = "C"  # not convergent


def node_count(n: int, m: int) -> int:
    return n * m ** (n - 1)


def node_id(player: int, rank: int, n: int, m: int) -> int:
    return player * m ** (n - 1) + rank


def node_label(node: int, n: int, m: int) -> tuple[int, int]:
    """(player, env_rank) of a node id."""
    return divmod(node, m ** (n - 1))


def node_env(node: int, n: int, m: int) -> Environment:
    player, rank = node_label(node, n, m)
    return env_unrank(player, rank, n, m)


def _normalize_order(order: Sequence[int] | None, n: int) -> tuple[int, ...]:
    if order is None:
        return tuple(range(n))
    order = tuple(int(p) for p in order)
    if sorted(order) != list(range(n)):
        raise InvalidOrderError(f"order {order} is not a permutation of 0..{n - 1}")
    return order


def next_players(order: Sequence[int]) -> tuple[int, ...]:
    """``nxt[i]`` is the player moving right after ``i`` in the cyclic order."""
    n = len(order)
    nxt = [0] * n
    for pos, p in enumerate(order):
        nxt[p] = order[(pos + 1) % n]
    return tuple(nxt)


@lru_cache(maxsize=64)
def _full_adjacency(n: int, m: int, order: tuple[int, ...]) -> np.ndarray:
    nxt = next_players(order)
    adj = np.empty((node_count(n, m), m), dtype=np.int64)
    for node in range(adj.shape[0]):
        env = node_env(node, n, m)
        j = nxt[env.player]
        for t in range(m):
            target = Environment.of(env.profile(t), j)
            adj[node, t] = node_id(j, env_rank(target, m), n, m)
    adj.setflags(write=False)
    return adj


@dataclass(frozen=True, eq=False)
class FullGraph:
    """All candidate moves: ``adjacency[v, t]`` is the successor of ``v`` when its player plays ``t``."""

    n: int
    m: int
    order: tuple[int, ...]
    adjacency: np.ndarray

    @property
    def node_count(self) -> int:
        return self.adjacency.shape[0]

    def successors(self, node: int) -> list[int]:
        return [int(v) for v in self.adjacency[node]]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, int(v)) for u in range(self.node_count) for v in self.adjacency[u]]


def build_full_graph(n: int, m: int, order: Sequence[int] | None = None,
                     max_nodes: int = MAX_FULL_GRAPH_NODES) -> FullGraph:
    if n < 2 or m < 2:
        raise GameError(f"need n >= 2 and m >= 2, got n={n}, m={m}")
    if node_count(n, m) > max_nodes:
        raise SizeGuardError(f"full graph for (n={n}, m={m}) has {node_count(n, m)} nodes > {max_nodes}")
    order = _normalize_order(order, n)
    return FullGraph(n, m, order, _full_adjacency(n, m, order))


@dataclass(frozen=True, eq=False)
class FunctionalGraph:
    n: int
    m: int
    successor: np.ndarray
    order: tuple[int, ...] = field(default=())

    @property
    def node_count(self) -> int:
        return len(self.successor)

    def __getitem__(self, node: int) -> int:
        return int(self.successor[node])


def build_functional_graph(brm: BestResponseMap, order: Sequence[int] | None = None) -> FunctionalGraph:
    full = build_full_graph(brm.n, brm.m, order)
    succ = full.adjacency[np.arange(full.node_count), brm.table.reshape(-1)]
    succ.setflags(write=False)
    return FunctionalGraph(brm.n, brm.m, succ, full.order)


def functional_graph_from_choices(choices: Sequence[int], n: int, m: int,
                                  order: Sequence[int] | None = None) -> FunctionalGraph:
    """Graph where node ``v`` moves along its ``choices[v]``-th candidate edge."""
    return build_functional_graph(BestResponseMap(n, m, np.asarray(choices)), order)


@dataclass(frozen=True)
class CondensedGraph:
    """Full graph with one PSNE's ``n`` nodes merged into sink 0.

    ``out_edges[v]`` lists successors of condensed node ``v`` with repetition
    for parallel edges; the sink has none.  ``original[v]`` gives the full-graph
    node ids folded into ``v``.
    """

    n: int
    m: int
    out_edges: tuple[tuple[int, ...], ...]
    original: tuple[tuple[int, ...], ...]
    sink: int = 0

    @property
    def node_count(self) -> int:
        return len(self.out_edges)

    def in_degree(self, node: int) -> int:
        return sum(row.count(node) for row in self.out_edges)


def condense_psne(full: FullGraph, psne: Sequence[int]) -> CondensedGraph:
    n, m = full.n, full.m
    psne = tuple(int(s) for s in psne)
    if len(psne) != n or any(not 0 <= s < m for s in psne):
        raise GameError(f"invalid profile {psne} for n={n}, m={m}")
    merged = [node_id(i, env_rank(Environment.of(psne, i), m), n, m) for i in range(n)]
    merged_set = set(merged)
    rest = [v for v in range(full.node_count) if v not in merged_set]
    index = {v: k + 1 for k, v in enumerate(rest)}
    index.update({v: 0 for v in merged})
    out = [()] + [tuple(index[w] for w in full.successors(v)) for v in rest]
    original = (tuple(merged),) + tuple((v,) for v in rest)
    return CondensedGraph(n, m, tuple(out), original)


@dataclass(frozen=True)
class Cycle:
    length: int
    nodes: tuple[int, ...]


def find_cycles(fg: FunctionalGraph) -> list[Cycle]:
    """Every cycle of an out-degree-one graph, in order of first discovery.

    Iterative three-colour walk: each node is visited once.
    """
    succ = fg.successor
    WHITE, GREY, BLACK = 0, 1, 2
    color = np.zeros(fg.node_count, dtype=np.int8)
    cycles = []
    for start in range(fg.node_count):
        if color[start] != WHITE:
            continue
        path = []
        v = start
        while color[v] == WHITE:
            color[v] = GREY
            path.append(v)
            v = int(succ[v])
        if color[v] == GREY:
            # v is on the current path, so the tail from v is a new cycle
            nodes = tuple(path[path.index(v):])
            cycles.append(Cycle(len(nodes), nodes))
        for u in path:
            color[u] = BLACK
    return cycles


def trajectory(fg: FunctionalGraph, start: int) -> tuple[list[int], list[int]]:
    """Split the walk from ``start`` into (transient path, terminal cycle)."""
    if not 0 <= start < fg.node_count:
        raise GameError(f"start node {start} out of range [0, {fg.node_count})")
    seen: dict[int, int] = {}
    walk = []
    v = start
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = fg[v]
    k = seen[v]
    return walk[:k], walk[k:]


@dataclass(frozen=True)
class Classification:
    psne_count: int
    convergent: bool
    game_type: GameType
    cycles: tuple[Cycle, ...]
    psne: tuple[tuple[int, ...], ...] = ()


def type_of(psne_count: int, convergent: bool) -> GameType:
    if not convergent:
        return GameType.C
    return GameType.A if psne_count == 1 else GameType.B


def cycle_profile(fg: FunctionalGraph, cycle: Cycle) -> tuple[int, ...]:
    """The strategy profile encoded by an ``n``-cycle."""
    env = node_env(cycle.nodes[0], fg.n, fg.m)
    # the mover's choice is recorded in the successor's environment
    after = node_env(fg[cycle.nodes[0]], fg.n, fg.m)
    return env.profile(after.profile(0)[env.player])


def classify_graph(fg: FunctionalGraph) -> Classification:
    cycles = tuple(find_cycles(fg))
    n_cycles = [c for c in cycles if c.length == fg.n]
    convergent = len(n_cycles) == len(cycles)
    psne = tuple(sorted(cycle_profile(fg, c) for c in n_cycles))
    return Classification(len(n_cycles), convergent, type_of(len(n_cycles), convergent), cycles, psne)


def classify(game: Game, order: Sequence[int] | None = None) -> Classification:
    return classify_graph(build_functional_graph(fast_best_response_map(game), order))


def classify_batch(successors: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Classify many functional graphs at once.

    ``successors`` has shape ``(batch, node_count)``.  Returns per-row
    (psne_count, convergent).  Lifts every node onto its terminal cycle by
    repeated squaring, then checks ``f^n(x) == x`` there.
    """
    succ = np.asarray(successors, dtype=np.int64)
    size = succ.shape[1]
    lift = succ
    steps = 1
    while steps < size:
        lift = np.take_along_axis(lift, lift, axis=1)
        steps *= 2
    on_cycle = lift
    fn = succ
    for _ in range(n - 1):
        fn = np.take_along_axis(succ, fn, axis=1)
    ident = np.arange(size)[None, :]
    psne_count = np.count_nonzero(fn == ident, axis=1) // n
    convergent = np.all(np.take_along_axis(fn, on_cycle, axis=1) == on_cycle, axis=1)
    return psne_count, convergent


def to_dot(fg: FunctionalGraph) -> str:
    """DOT text with nodes labelled ``p<player>:e<env_rank>``, one edge per line."""
    lines = ["digraph best_response {"]
    for u in range(fg.node_count):
        pu, eu = node_label(u, fg.n, fg.m)
        pv, ev = node_label(fg[u], fg.n, fg.m)
        lines.append(f'  "p{pu}:e{eu}" -> "p{pv}:e{ev}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def profile_node(profile: Sequence[int], player: int, m: int) -> int:
    n = len(profile)
    return node_id(player, env_rank(Environment.of(profile, player), m), n, m)


__all__ = [
    "Classification",
    "CondensedGraph",
    "Cycle",
    "FullGraph",
    "FunctionalGraph",
    "GameType",
    "InvalidOrderError",
    "SizeGuardError",
    "build_full_graph",
    "build_functional_graph",
    "classify",
    "classify_batch",
    "classify_graph",
    "condense_psne",
    "find_cycles",
    "functional_graph_from_choices",
    "node_count",
    "node_id",
    "profile_node",
    "to_dot",
    "trajectory",
]
