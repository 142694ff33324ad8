"""Weighted modularity and Louvain community detection."""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Sequence

from .errors import EmptyGraphError

logger = logging.getLogger(__name__)

# Minimum gain (in edge-weight units) for a node move to count as an improvement.
MOVE_EPS = 1e-10


@dataclass(frozen=True)
class WeightedGraph:
    """Plain undirected weighted graph used by the community routines.

    Node order is significant: the seeded visit order is a permutation of
    node positions, not of ids.
    """

    nodes: tuple
    edges: tuple  # (u, v, weight)

    @classmethod
    def from_edges(cls, edges: Iterable[tuple], nodes: Optional[Iterable[Hashable]] = None) -> "WeightedGraph":
        edges = tuple((e[0], e[1], e[2] if len(e) > 2 else 1.0) for e in edges)
        if nodes is None:
            seen: dict = {}
            for u, v, _ in edges:
                seen.setdefault(u, None)
                seen.setdefault(v, None)
            nodes = seen
        return cls(tuple(nodes), edges)

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.edges))


@dataclass(frozen=True)
class CommunityAssignment:
    membership: dict = field(default_factory=dict)
    q: float = 0.0
    resolution: float = 1.0
    seed: int = 0

    @property
    def n_communities(self) -> int:
        return len(set(self.membership.values()))


def modularity(graph: WeightedGraph, membership: Mapping, resolution: float = 1.0) -> float:
    """Newman-Girvan weighted modularity with a resolution factor.

    Self-loops count twice towards a node's strength. Returns 0 when the graph
    carries no edge weight.
    """
    m = graph.total_weight
    if m <= 0:
        logger.debug("modularity of a graph with zero total weight defined as 0")
        return 0.0
    internal: dict = {}
    strength: dict = {}
    for u, v, w in graph.edges:
        cu, cv = membership[u], membership[v]
        strength[cu] = strength.get(cu, 0.0) + w
        strength[cv] = strength.get(cv, 0.0) + w
        if cu == cv:
            internal[cu] = internal.get(cu, 0.0) + 2.0 * w
    two_m = 2.0 * m
    q = 0.0
    for c, tot in strength.items():
        q += internal.get(c, 0.0) / two_m - resolution * (tot / two_m) ** 2
    return q


class _Level:
    """Integer-indexed graph: neighbour maps without self-loops, plus loop weights."""

    __slots__ = ("adj", "loops", "strength")

    def __init__(self, adj: list[dict[int, float]], loops: list[float]):
        self.adj = adj
        self.loops = loops
        self.strength = [sum(a.values()) + 2.0 * lp for a, lp in zip(adj, loops)]

    def __len__(self) -> int:
        return len(self.adj)

    @classmethod
    def from_graph(cls, graph: WeightedGraph) -> "_Level":
        index = {n: i for i, n in enumerate(graph.nodes)}
        adj: list[dict[int, float]] = [dict() for _ in graph.nodes]
        loops = [0.0] * len(graph.nodes)
        for u, v, w in graph.edges:
            i, j = index[u], index[v]
            if i == j:
                loops[i] += w
            else:
                adj[i][j] = adj[i].get(j, 0.0) + w
                adj[j][i] = adj[j].get(i, 0.0) + w
        return cls(adj, loops)

    def aggregate(self, comm: Sequence[int]) -> "_Level":
        k = max(comm) + 1
        adj: list[dict[int, float]] = [dict() for _ in range(k)]
        loops = [0.0] * k
        for i, nbrs in enumerate(self.adj):
            ci = comm[i]
            loops[ci] += self.loops[i]
            row = adj[ci]
            for j, w in nbrs.items():
                cj = comm[j]
                if cj == ci:
                    loops[ci] += w / 2.0
                else:
                    row[cj] = row.get(cj, 0.0) + w
        return _Level(adj, loops)


def _renumber(comm: Sequence[int]) -> list[int]:
    mapping: dict[int, int] = {}
    return [mapping.setdefault(c, len(mapping)) for c in comm]


def _move_nodes(level: _Level, comm: list[int], two_m: float, resolution: float, rng: random.Random) -> bool:
    """Greedy single-node moves until none improves modularity. Mutates ``comm``."""
    n = len(level)
    tot: dict[int, float] = {}
    for i in range(n):
        tot[comm[i]] = tot.get(comm[i], 0.0) + level.strength[i]
    order = list(range(n))
    rng.shuffle(order)
    improved = False
    while True:
        moves = 0
        for i in order:
            ci = comm[i]
            ki = level.strength[i]
            links: dict[int, float] = {}
            for j, w in level.adj[i].items():
                cj = comm[j]
                links[cj] = links.get(cj, 0.0) + w
            tot[ci] -= ki
            scale = resolution * ki / two_m
            best = ci
            best_gain = links.get(ci, 0.0) - tot[ci] * scale
            for c, w in links.items():
                gain = w - tot[c] * scale
                if gain > best_gain + MOVE_EPS:
                    best, best_gain = c, gain
            tot[best] = tot.get(best, 0.0) + ki
            if best != ci:
                comm[i] = best
                moves += 1
        if not moves:
            return improved
        improved = True


def _by_size(nodes: Sequence, partition: Sequence[int]) -> dict:
    sizes: dict[int, int] = {}
    first: dict[int, int] = {}
    for pos, c in enumerate(partition):
        sizes[c] = sizes.get(c, 0) + 1
        first.setdefault(c, pos)
    ranked = sorted(sizes, key=lambda c: (-sizes[c], first[c]))
    new_id = {c: i for i, c in enumerate(ranked)}
    return {n: new_id[c] for n, c in zip(nodes, partition)}


def louvain(graph: WeightedGraph, resolution: float = 1.0, seed: int = 42) -> CommunityAssignment:
    """Louvain modularity optimisation.

    Alternates local moving and aggregation; once the hierarchy stalls, a pass
    of single-node moves on the original graph is tried, and the hierarchy is
    resumed from its result whenever it finds an improvement. Community ids are
    ordered by decreasing size.
    """
    if not graph.nodes:
        raise EmptyGraphError("empty graph")
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    base = _Level.from_graph(graph)
    n = len(base)
    m = graph.total_weight
    if m <= 0:
        membership = {node: i for i, node in enumerate(graph.nodes)}
        return CommunityAssignment(membership, 0.0, resolution, seed)
    two_m = 2.0 * m
    rng = random.Random(seed)

    partition = list(range(n))
    level = base
    while True:
        while True:
            comm = list(range(len(level)))
            if not _move_nodes(level, comm, two_m, resolution, rng):
                break
            comm = _renumber(comm)
            partition = [comm[c] for c in partition]
            level = level.aggregate(comm)
        refined = list(partition)
        if not _move_nodes(base, refined, two_m, resolution, rng):
            break
        partition = _renumber(refined)
        level = base.aggregate(partition)

    membership = _by_size(graph.nodes, partition)
    return CommunityAssignment(membership, modularity(graph, membership, resolution), resolution, seed)


def _louvain_job(args):
    graph, resolution, seed = args
    return louvain(graph, resolution, seed)


def best_louvain(
    graph: WeightedGraph,
    resolution: float = 1.0,
    seed: int = 42,
    n_restarts: int = 1,
    workers: int = 1,
) -> CommunityAssignment:
    """Run ``n_restarts`` seeds (seed, seed+1, ...) and keep the highest Q.

    Ties go to the earliest seed, so the answer does not depend on ``workers``.
    """
    jobs = [(graph, resolution, seed + r) for r in range(n_restarts)]
    if workers > 1 and n_restarts > 1:
        with ProcessPoolExecutor(max_workers=min(workers, n_restarts)) as pool:
            results = list(pool.map(_louvain_job, jobs))
    else:
        results = [_louvain_job(j) for j in jobs]
    best = results[0]
    for r in results[1:]:
        if r.q > best.q + 1e-12:
            best = r
    return best
