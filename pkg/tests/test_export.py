import csv
import io
import xml.etree.ElementTree as ET

import networkx as nx
import pytest

from wordlayers.community import CommunityAssignment
from wordlayers.errors import OutputError
from wordlayers.export import (
    ExportConfig,
    RunReport,
    parse_report,
    read_gexf,
    write_csv,
    write_gexf,
    write_graphml,
    write_report,
)
from wordlayers.ingest import WORLDCUP_2022_LAYERS
from wordlayers.layergraph import LayerGraph, LayerNode
from wordlayers.multilayer import INTER, Edge, MultilayerGraph, SupraNode, assemble


def tiny_graph():
    layer = WORLDCUP_2022_LAYERS[0]
    nodes = {"a": SupraNode("a", "a", 0, 3), "b": SupraNode("b", "b", 0, 2, True)}
    return MultilayerGraph((layer,), nodes, (Edge.make("a", "b", 4),))


def five_layer_graph():
    graphs = []
    for i in range(5):
        nodes = {w: LayerNode(w, 10 - i, w == "world") for w in ["world", "messi", "goal"]}
        graphs.append(LayerGraph(i, nodes, {("goal", "messi"): i + 1, ("messi", "world"): 2}))
    return assemble(graphs, WORLDCUP_2022_LAYERS, {"world"})


def membership_for(g):
    return CommunityAssignment({nid: i % 3 for i, nid in enumerate(sorted(g.nodes))}, 0.25)


def test_minimal_gexf(tmp_path):
    g = tiny_graph()
    path = write_gexf(g, CommunityAssignment({"a": 0, "b": 0}), ExportConfig(output_dir=str(tmp_path)))
    root = ET.parse(path).getroot()
    ns = {"g": "http://gexf.net/1.3"}
    assert root.get("version") == "1.3"
    assert len(root.findall(".//g:node", ns)) == 2
    edges = root.findall(".//g:edge", ns)
    assert len(edges) == 1 and edges[0].get("weight") == "4"


def test_gexf_round_trip(tmp_path):
    g = five_layer_graph()
    comm = membership_for(g)
    cfg = ExportConfig(output_dir=str(tmp_path), layer_spacing=50.0)
    nodes, edges = read_gexf(write_gexf(g, comm, cfg))
    assert set(nodes) == set(g.nodes)
    assert {n[-1] for n in nodes if not n.endswith(("world", "messi", "goal"))} == {"^", "*", "†", "‡"}
    for nid, attrs in nodes.items():
        n = g.nodes[nid]
        assert attrs["base_word"] == n.base_word
        assert attrs["layer"] == n.layer
        assert attrs["layer_name"] == WORLDCUP_2022_LAYERS[n.layer].name
        assert attrs["is_pillar"] == n.is_pillar
        assert attrs["community"] == comm.membership[nid]
        assert attrs["weight"] == n.weight
        assert attrs["position"][2] == n.layer * 50.0
    got = sorted((e["source"], e["target"], e["weight"], e["kind"]) for e in edges)
    want = sorted((e.source, e.target, float(e.weight), e.kind) for e in g.edges)
    assert got == want
    assert sum(1 for e in edges if e["kind"] == INTER) == 4


def test_gexf_without_positions(tmp_path):
    g = five_layer_graph()
    nodes, _ = read_gexf(write_gexf(g, None, ExportConfig(output_dir=str(tmp_path), include_positions=False)))
    assert all("position" not in a for a in nodes.values())
    assert all(a["community"] == -1 for a in nodes.values())


def test_positions_are_per_layer_circles(tmp_path):
    g = five_layer_graph()
    nodes, _ = read_gexf(write_gexf(g, None, ExportConfig(output_dir=str(tmp_path))))
    radius = 10.0 * 3 ** 0.5
    for attrs in nodes.values():
        x, y, _ = attrs["position"]
        assert (x * x + y * y) ** 0.5 == pytest.approx(radius, abs=1e-5)


def test_graphml_parses_with_networkx(tmp_path):
    g = five_layer_graph()
    comm = membership_for(g)
    path = write_graphml(g, comm, ExportConfig(output_dir=str(tmp_path)))
    G = nx.read_graphml(path)
    assert set(G.nodes) == set(g.nodes)
    assert G.number_of_edges() == len(g.edges)
    assert G.nodes["messi‡"]["layer"] == 4
    assert G.nodes["world^"]["is_pillar"] is True
    assert G.nodes["goal*"]["community"] == comm.membership["goal*"]
    assert G.edges["world", "world^"]["kind"] == "inter"
    assert G.edges["goal†", "messi†"]["weight"] == 4.0


def test_csv_layout_and_determinism(tmp_path):
    g = five_layer_graph()
    comm = membership_for(g)
    n1, e1 = write_csv(g, comm, ExportConfig(), tmp_path / "one")
    n2, e2 = write_csv(g, comm, ExportConfig(), tmp_path / "two")
    assert n1.read_bytes() == n2.read_bytes() and e1.read_bytes() == e2.read_bytes()
    rows = list(csv.reader(io.StringIO(n1.read_text("utf-8"), newline="")))
    assert rows[0] == ["id", "base_word", "layer", "weight", "is_pillar", "community"]
    assert [r[0] for r in rows[1:]] == sorted(g.nodes)
    erows = list(csv.reader(io.StringIO(e1.read_text("utf-8"), newline="")))
    assert erows[0] == ["source", "target", "weight", "kind"]
    assert [tuple(r[:2]) for r in erows[1:]] == sorted((e.source, e.target) for e in g.edges)
    assert n1.read_bytes().endswith(b"\r\n")


GOLDEN_NODES = (
    "id,base_word,layer,weight,is_pillar,community\r\n"
    "a,a,0,3,false,0\r\n"
    "b,b,0,2,true,0\r\n"
)
GOLDEN_EDGES = "source,target,weight,kind\r\na,b,4,intra\r\n"


def test_csv_golden(tmp_path):
    n, e = write_csv(tiny_graph(), CommunityAssignment({"a": 0, "b": 0}), ExportConfig(), tmp_path)
    assert n.read_bytes() == GOLDEN_NODES.encode()
    assert e.read_bytes() == GOLDEN_EDGES.encode()


def test_csv_quotes_awkward_ids(tmp_path):
    layer = WORLDCUP_2022_LAYERS[0]
    g = MultilayerGraph((layer,), {'say"hi,': SupraNode('say"hi,', 'say"hi,', 0, 1)})
    n, _ = write_csv(g, None, ExportConfig(), tmp_path)
    assert '"say""hi,"' in n.read_text("utf-8")


def test_empty_graph_header_only(tmp_path):
    g = MultilayerGraph(tuple(WORLDCUP_2022_LAYERS))
    n, e = write_csv(g, None, ExportConfig(), tmp_path)
    assert n.read_bytes() == b"id,base_word,layer,weight,is_pillar,community\r\n"
    assert e.read_bytes() == b"source,target,weight,kind\r\n"


def test_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OutputError):
        write_gexf(tiny_graph(), None, ExportConfig(output_dir=str(blocker / "sub")))
    with pytest.raises(OutputError):
        write_csv(tiny_graph(), None, ExportConfig(), blocker / "sub")


def test_export_config_validation():
    assert ExportConfig().validate() == []
    assert ExportConfig(formats=()).validate()
    assert ExportConfig(formats=("png",)).validate()
    assert ExportConfig(layer_spacing=0).validate()


def test_report_round_trip(tmp_path):
    r = RunReport(total_documents=10, final_nodes=3, final_intra_edges=2, final_inter_edges=1,
                  communities=2, modularity=0.125, config={"top_k": "300"}, timings={"ingest": 0.5})
    data = parse_report(write_report(r, tmp_path / "r.txt").read_text("utf-8"))
    assert data["total_documents"] == "10"
    assert data["final_edges"] == "3"
    assert float(data["modularity"]) == 0.125
    assert data["config.top_k"] == "300"
    assert "timing.ingest_s" in data


def test_report_empty_corpus():
    data = parse_report(RunReport(note="empty corpus").render())
    assert data["final_nodes"] == "0" and data["note"] == "empty corpus"
    assert "modularity" not in data
