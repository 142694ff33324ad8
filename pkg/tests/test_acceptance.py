"""Exit criteria for the build. One pass/fail line per criterion is printed
in the terminal summary ("acceptance criteria" section)."""

import csv
import itertools
import random
import resource
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import WORLDCUP_CONFIG
from oracles import (
    brute_best_modularity,
    brute_giant,
    clique_ring,
    ilp_best_modularity,
    local_move_violations,
    naive_bigrams,
    naive_unigrams,
    sorted_top_k,
    two_triangles,
)
from wordlayers.cli import main
from wordlayers.community import WeightedGraph, louvain, modularity
from wordlayers.bigram import count_bigrams, count_unigrams
from wordlayers.config import load_config, with_overrides
from wordlayers.export import parse_report, read_gexf
from wordlayers.layergraph import select_top_k
from wordlayers.multilayer import Edge, MultilayerGraph, SupraNode, giant_component
from wordlayers.ingest import WORLDCUP_2022_LAYERS
from wordlayers.pipeline import run_pipeline
from wordlayers.synth import write_jsonl

SUFFIXES = ["", "^", "*", "†", "‡"]
PILLARS = ["world", "fifa", "team"]


def rows(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def partition_sets(membership):
    groups = {}
    for n, c in membership.items():
        groups.setdefault(c, set()).add(n)
    return sorted(map(frozenset, groups.values()), key=min)


@pytest.fixture(scope="module")
def default_run(corpus_5000, tmp_path_factory):
    out = tmp_path_factory.mktemp("default_run")
    code = main(["--config", str(WORLDCUP_CONFIG), "--input", str(corpus_5000), "--output-dir", str(out), "-q"])
    return code, out


@pytest.mark.acceptance(1, "bigram/unigram counts equal brute force on 500 random corpora in < 5 s")
def test_c1_bigram_oracle():
    rng = random.Random(2024)
    t0 = time.perf_counter()
    for _ in range(500):
        vocab = [f"t{i}" for i in range(rng.randint(1, 20))]
        docs = [[rng.choice(vocab) for _ in range(rng.randint(0, 30))] for _ in range(rng.randint(0, 50))]
        assert dict(count_unigrams(docs)) == naive_unigrams(docs)
        assert dict(count_bigrams(docs)) == naive_bigrams(docs)
    assert time.perf_counter() - t0 < 5.0


@pytest.mark.acceptance(2, "top-K matches sort oracle with ties; |result| <= k + |pillars|; pillars forced in")
def test_c2_top_k():
    rng = random.Random(7)
    for _ in range(500):
        vocab = [f"w{i:02d}" for i in range(rng.randint(1, 30))]
        counts = {w: rng.randint(1, 4) for w in vocab}
        k = rng.randint(1, 35)
        pillars = set(rng.sample(vocab + ["absent"], min(3, len(vocab) + 1)))
        got = select_top_k(counts, k, pillars)
        assert got == sorted_top_k(counts, k, pillars)
        assert len(got) <= k + len(pillars)
        assert {p for p in pillars if p in counts} <= got
    # a pillar ranked last still enters
    assert "c" in select_top_k({"a": 5, "b": 3, "c": 1}, 2, {"c"})


@pytest.mark.acceptance(3, "giant component equals brute-force labeling on 200 random graphs; idempotent")
def test_c3_giant_component():
    rng = random.Random(99)
    layer = WORLDCUP_2022_LAYERS[0]
    for _ in range(200):
        n = rng.randint(0, 100)
        nodes = [f"n{i:03d}" for i in range(n)]
        p = rng.choice([0.003, 0.01, 0.02, 0.04, 0.1])
        edges = [(a, b) for a, b in itertools.combinations(nodes, 2) if rng.random() < p]
        g = MultilayerGraph((layer,), {x: SupraNode(x, x, 0, 1) for x in nodes},
                            tuple(Edge.make(a, b, 1) for a, b in edges))
        gc = giant_component(g)
        assert set(gc.nodes) == brute_giant(nodes, edges)
        assert giant_component(gc) == gc


@pytest.mark.acceptance(4, "modularity: all-in-one 0 (1e-12), two triangles 5/14 (1e-9), single edge -1/2 (1e-12)")
def test_c4_modularity():
    rng = random.Random(4)
    for _ in range(50):
        n = rng.randint(2, 40)
        nodes = [f"v{i}" for i in range(n)]
        edges = [(a, b, rng.uniform(0.1, 10.0)) for a, b in itertools.combinations(nodes, 2) if rng.random() < 0.3]
        edges.append((nodes[0], nodes[1], rng.uniform(0.1, 10.0)))
        assert abs(modularity(WeightedGraph(tuple(nodes), tuple(edges)), {v: 0 for v in nodes})) <= 1e-12
    nodes, edges, planted = two_triangles()
    assert abs(modularity(WeightedGraph(tuple(nodes), tuple(edges)), planted) - 5 / 14) <= 1e-9
    single = WeightedGraph(("a", "b"), (("a", "b", 1),))
    assert abs(modularity(single, {"a": 0, "b": 1}) + 0.5) <= 1e-12


@pytest.mark.acceptance(5, "Louvain recovers planted partitions at the exact optimum; local-move optimal (<= 200 nodes)")
def test_c5_louvain(tmp_path):
    nodes, edges, planted = two_triangles()
    res = louvain(WeightedGraph(tuple(nodes), tuple(edges)))
    assert partition_sets(res.membership) == partition_sets(planted)
    best_q, _ = brute_best_modularity(nodes, edges)
    assert abs(res.q - best_q) <= 1e-9
    assert local_move_violations(nodes, edges, res.membership) == []

    # Bell(16) partitions is out of reach; the exact optimum comes from an ILP instead
    nodes, edges, planted = clique_ring()
    res = louvain(WeightedGraph(tuple(nodes), tuple(edges)))
    assert partition_sets(res.membership) == partition_sets(planted)
    assert abs(res.q - ilp_best_modularity(nodes, edges)) <= 1e-9
    assert local_move_violations(nodes, edges, res.membership) == []

    rng = random.Random(55)
    for trial in range(30):
        n = rng.randint(10, 200)
        nodes = [f"r{i}" for i in range(n)]
        p = rng.uniform(1.5, 6.0) / n
        edges = [(a, b, rng.randint(1, 4)) for a, b in itertools.combinations(nodes, 2) if rng.random() < p]
        if not edges:
            continue
        res = louvain(WeightedGraph(tuple(nodes), tuple(edges)), seed=trial)
        assert local_move_violations(nodes, edges, res.membership) == []

    # a real pipeline output graph small enough for the exhaustive check
    cfg = load_config(WORLDCUP_CONFIG)
    corpus = tmp_path / "small.jsonl"
    write_jsonl(corpus, 400, seed=5)
    cfg = with_overrides(cfg, inputs=[str(corpus)], top_k=35, output_dir=str(tmp_path / "out"), formats=("csv",))
    result = run_pipeline(cfg)
    wg = result.graph.weighted_graph()
    assert 0 < len(wg.nodes) <= 200
    assert local_move_violations(list(wg.nodes), list(wg.edges), result.communities.membership) == []


@pytest.mark.acceptance(6, "shipped config on 5,000 synthetic docs: 5 layers, suffixes, 4 inter edges per pillar, <= 303 nodes/layer")
def test_c6_default_shape(default_run):
    code, out = default_run
    assert code == 0
    report = parse_report((out / "report.txt").read_text("utf-8"))
    assert sum(1 for k in report if k.startswith("layer.") and k.endswith(".name")) == 5
    nodes = rows(out / "nodes.csv")
    layers = {int(n["layer"]) for n in nodes}
    assert layers == {0, 1, 2, 3, 4}
    for n in nodes:
        layer = int(n["layer"])
        if layer == 0:
            assert n["id"] == n["base_word"]
            assert not n["id"].endswith(tuple(SUFFIXES[1:]))
        else:
            assert n["id"] == n["base_word"] + SUFFIXES[layer]
    for i in range(5):
        assert int(report[f"layer.{i}.nodes"]) <= 303
        assert sum(1 for n in nodes if int(n["layer"]) == i) <= 303
    inter = [e for e in rows(out / "edges.csv") if e["kind"] == "inter"]
    ids = {n["id"] for n in nodes}
    in_all = [p for p in PILLARS if all(p + s in ids for s in SUFFIXES)]
    assert in_all == PILLARS
    for p in in_all:
        assert sum(1 for e in inter if e["source"].rstrip("^*†‡") == p) == 4
    assert len(inter) == 4 * len(in_all)


@pytest.mark.acceptance(7, "GEXF round-trip exact; CSVs byte-identical across runs; report counts equal CSV recount")
def test_c7_export_round_trip(default_run, corpus_5000, tmp_path):
    code, out = default_run
    assert code == 0
    gnodes, gedges = read_gexf(out / "network.gexf")
    nodes = rows(out / "nodes.csv")
    edges = rows(out / "edges.csv")
    assert set(gnodes) == {n["id"] for n in nodes}
    for n in nodes:
        a = gnodes[n["id"]]
        assert (a["base_word"], a["layer"], a["weight"], a["is_pillar"], a["community"]) == (
            n["base_word"], int(n["layer"]), int(n["weight"]), n["is_pillar"] == "true", int(n["community"]))
        assert a["layer_name"] == WORLDCUP_2022_LAYERS[a["layer"]].name
    as_multiset = lambda es: sorted((e["source"], e["target"], float(e["weight"]), e["kind"]) for e in es)  # noqa: E731
    assert as_multiset(gedges) == as_multiset(edges)

    again = tmp_path / "again"
    assert main(["--config", str(WORLDCUP_CONFIG), "--input", str(corpus_5000), "--output-dir", str(again), "-q"]) == 0
    for f in ("nodes.csv", "edges.csv"):
        assert (out / f).read_bytes() == (again / f).read_bytes()

    report = parse_report((out / "report.txt").read_text("utf-8"))
    assert int(report["final_nodes"]) == len(nodes) == len(gnodes)
    assert int(report["final_edges"]) == len(edges) == len(gedges)
    assert int(report["final_inter_edges"]) == sum(e["kind"] == "inter" for e in edges)
    assert int(report["final_intra_edges"]) == sum(e["kind"] == "intra" for e in edges)
    assert int(report["communities"]) == len({n["community"] for n in nodes})


@pytest.mark.acceptance(8, "--threads 1 and --threads 8 give byte-identical CSVs")
def test_c8_threads(corpus_5000, tmp_path):
    outs = {}
    for n in (1, 8):
        outs[n] = tmp_path / f"t{n}"
        assert main(["--config", str(WORLDCUP_CONFIG), "--input", str(corpus_5000),
                     "--output-dir", str(outs[n]), "--threads", str(n), "--format", "csv", "-q"]) == 0
    for f in ("nodes.csv", "edges.csv"):
        assert (outs[1] / f).read_bytes() == (outs[8] / f).read_bytes()
    # parallel restarts as well
    cfg = with_overrides(load_config(WORLDCUP_CONFIG), inputs=[str(corpus_5000)], n_restarts=4, formats=("csv",))
    r1 = run_pipeline(with_overrides(cfg, output_dir=str(tmp_path / "r1")), threads=1)
    r8 = run_pipeline(with_overrides(cfg, output_dir=str(tmp_path / "r8")), threads=8)
    assert r1.communities.membership == r8.communities.membership
    assert (tmp_path / "r1" / "nodes.csv").read_bytes() == (tmp_path / "r8" / "nodes.csv").read_bytes()


@pytest.mark.slow
@pytest.mark.acceptance(9, "100,000 docs (~15 tokens) through the full pipeline in < 10 s and < 1 GB RSS")
def test_c9_throughput(tmp_path):
    corpus = tmp_path / "c100k.jsonl"
    write_jsonl(corpus, 100_000, seed=3, tokens_per_doc=15)
    out = tmp_path / "out"
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "wordlayers", "--config", str(WORLDCUP_CONFIG), "--input", str(corpus),
         "--output-dir", str(out), "-q"],
        capture_output=True, text=True,
    )
    elapsed = time.perf_counter() - t0
    peak_kb = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss
    assert proc.returncode == 0, proc.stderr
    report = parse_report((out / "report.txt").read_text("utf-8"))
    assert int(report["total_documents"]) == 100_000
    print(f"throughput: {elapsed:.2f} s, peak RSS {peak_kb / 1024:.0f} MiB")
    assert elapsed < 10.0
    assert peak_kb < 1024 * 1024
