"""Top-K word selection and per-layer word graphs."""

from __future__ import annotations

import csv
import heapq
from dataclasses import dataclass, field
from typing import Collection, Mapping

from .bigram import BigramTable


@dataclass(frozen=True)
class LayerNode:
    word: str
    weight: int
    is_pillar: bool = False


@dataclass(frozen=True)
class LayerGraph:
    """Undirected weighted word graph of one layer.

    ``edges`` keys are ``(w1, w2)`` with ``w1 < w2``.
    """

    layer: int
    nodes: dict[str, LayerNode] = field(default_factory=dict)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)


def select_top_k(unigram_counts: Mapping[str, int], k: int, pillars: Collection[str] = ()) -> set[str]:
    """The ``k`` most frequent words (ties: lexicographically smaller first),
    plus every pillar word that occurs at all."""
    if k < 1:
        raise ValueError("k must be >= 1")
    top = heapq.nsmallest(k, unigram_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    chosen = {w for w, _ in top}
    chosen.update(p for p in pillars if p in unigram_counts)
    return chosen


def build_layer_graph(
    table: BigramTable,
    nodes: Collection[str],
    pillars: Collection[str] = (),
    min_edge_weight: int = 1,
) -> LayerGraph:
    """Induce the symmetrized bigram graph on ``nodes``."""
    node_set = set(nodes)
    missing = node_set.difference(table.unigram_counts)
    if missing:
        raise ValueError(f"nodes not in unigram table: {sorted(missing)[:5]}")
    weights: dict[tuple[str, str], int] = {}
    for (a, b), c in table.bigram_counts.items():
        if a in node_set and b in node_set:
            key = (a, b) if a < b else (b, a)
            weights[key] = weights.get(key, 0) + c
    edges = {key: w for key, w in sorted(weights.items()) if w >= min_edge_weight}
    pillar_set = set(pillars)
    graph_nodes = {
        w: LayerNode(w, table.unigram_counts[w], w in pillar_set) for w in sorted(node_set)
    }
    return LayerGraph(table.layer, graph_nodes, edges)


def write_edge_list(graph: LayerGraph, path) -> None:
    """Debug dump of one layer: ``source,target,weight``."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["source", "target", "weight"])
        for (a, b), weight in graph.edges.items():
            w.writerow([a, b, weight])
