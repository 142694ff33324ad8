"""Supra-graph assembly: per-layer id suffixes, pillar coupling, giant component."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Collection, Iterable, Sequence

from .community import WeightedGraph
from .errors import AssemblyError
from .ingest import LayerSpec
from .layergraph import LayerGraph

INTRA = "intra"
INTER = "inter"
COUPLINGS = ("consecutive", "all_pairs")


@dataclass(frozen=True)
class SupraNode:
    id: str
    base_word: str
    layer: int
    weight: int
    is_pillar: bool = False


@dataclass(frozen=True)
class Edge:
    """Undirected edge stored with ``source < target``."""

    source: str
    target: str
    weight: int
    kind: str = INTRA

    @classmethod
    def make(cls, a: str, b: str, weight: int, kind: str = INTRA) -> "Edge":
        return cls(a, b, weight, kind) if a < b else cls(b, a, weight, kind)


@dataclass(frozen=True)
class MultilayerGraph:
    layers: tuple[LayerSpec, ...]
    nodes: dict[str, SupraNode] = field(default_factory=dict)
    intra_edges: tuple[Edge, ...] = ()
    inter_edges: tuple[Edge, ...] = ()

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self.intra_edges + self.inter_edges

    def __len__(self) -> int:
        return len(self.nodes)

    def adjacency(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {n: [] for n in self.nodes}
        for e in self.edges:
            adj[e.source].append(e.target)
            adj[e.target].append(e.source)
        return adj

    def layer_nodes(self, layer: int) -> list[SupraNode]:
        return [n for n in self.nodes.values() if n.layer == layer]

    def weighted_graph(self, include_inter: bool = True) -> WeightedGraph:
        """Sorted-id view of the supra-graph for the community routines."""
        edges = self.edges if include_inter else self.intra_edges
        return WeightedGraph(
            tuple(sorted(self.nodes)),
            tuple((e.source, e.target, e.weight) for e in sorted(edges, key=lambda e: (e.source, e.target))),
        )

    def with_inter_edges(self, inter: Iterable[Edge]) -> "MultilayerGraph":
        return MultilayerGraph(self.layers, self.nodes, self.intra_edges, tuple(inter))


def node_id(word: str, layer: LayerSpec) -> str:
    return word + layer.suffix


def strip_suffix(nid: str, layers: Sequence[LayerSpec]) -> tuple[str, int]:
    """Recover ``(base_word, layer_index)`` from a suffixed id.

    Relies on suffixes being made of punctuation/symbols, which the tokenizer
    never leaves at the end of a word, so the longest matching suffix wins.
    """
    best = None
    for layer in layers:
        if nid.endswith(layer.suffix) and len(nid) > len(layer.suffix):
            if best is None or len(layer.suffix) > len(best.suffix):
                best = layer
    if best is None:
        raise ValueError(f"no layer suffix matches {nid!r}")
    return nid[: len(nid) - len(best.suffix)], best.index


def disambiguate(graphs: Sequence[LayerGraph], layers: Sequence[LayerSpec]) -> MultilayerGraph:
    """Rename every word to ``word + suffix`` of its layer and pool all layers."""
    if len(graphs) != len(layers):
        raise AssemblyError(f"{len(graphs)} layer graphs for {len(layers)} layers")
    nodes: dict[str, SupraNode] = {}
    intra: list[Edge] = []
    for g, spec in zip(graphs, layers):
        if g.layer != spec.index:
            raise AssemblyError(f"layer graph {g.layer} in slot of layer {spec.index}")
        for word, n in g.nodes.items():
            nid = node_id(word, spec)
            if nid in nodes:
                raise AssemblyError(f"duplicate node id {nid!r}")
            nodes[nid] = SupraNode(nid, word, spec.index, n.weight, n.is_pillar)
        for (a, b), w in g.edges.items():
            intra.append(Edge.make(node_id(a, spec), node_id(b, spec), w, INTRA))
    return MultilayerGraph(tuple(layers), nodes, tuple(intra), ())


def add_pillar_edges(
    graph: MultilayerGraph, pillars: Collection[str], coupling: str = "consecutive"
) -> list[Edge]:
    """Weight-1 edges joining instances of each pillar word across layers."""
    if coupling not in COUPLINGS:
        raise ValueError(f"unknown coupling {coupling!r}")
    layers = graph.layers
    out: list[Edge] = []
    for word in sorted({p.lower() for p in pillars}):
        present = [spec for spec in layers if node_id(word, spec) in graph.nodes]
        for i, a in enumerate(present):
            for b in present[i + 1 :]:
                if coupling == "consecutive" and b.index != a.index + 1:
                    continue
                out.append(Edge.make(node_id(word, a), node_id(word, b), 1, INTER))
    return out


def assemble(
    graphs: Sequence[LayerGraph],
    layers: Sequence[LayerSpec],
    pillars: Collection[str],
    coupling: str = "consecutive",
) -> MultilayerGraph:
    g = disambiguate(graphs, layers)
    return g.with_inter_edges(add_pillar_edges(g, pillars, coupling))


def connected_components(graph: MultilayerGraph) -> list[list[str]]:
    """Components over intra and inter edges, each sorted, in order of first node id."""
    adj = graph.adjacency()
    seen: set[str] = set()
    comps = []
    for start in sorted(adj):
        if start in seen:
            continue
        seen.add(start)
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def induced_subgraph(graph: MultilayerGraph, keep: Collection[str]) -> MultilayerGraph:
    keep = set(keep)
    return MultilayerGraph(
        graph.layers,
        {nid: n for nid, n in graph.nodes.items() if nid in keep},
        tuple(e for e in graph.intra_edges if e.source in keep and e.target in keep),
        tuple(e for e in graph.inter_edges if e.source in keep and e.target in keep),
    )


def giant_component(graph: MultilayerGraph) -> MultilayerGraph:
    """Largest connected component; equal sizes resolved by smallest node id."""
    comps = connected_components(graph)
    if not comps:
        return graph
    # comps are already ordered by their smallest id, so max() keeps the first of equal size
    best = max(comps, key=len)
    return induced_subgraph(graph, best)
