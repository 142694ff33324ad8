"""Writers (and matching readers) for GEXF 1.3, GraphML, CSV and the run report."""

from __future__ import annotations

import csv
import math
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .community import CommunityAssignment
from .errors import OutputError
from .multilayer import Edge, MultilayerGraph

FORMATS = ("gexf", "graphml", "csv")

GEXF_NS = "http://gexf.net/1.3"
VIZ_NS = "http://gexf.net/1.3/viz"
XSI_NS = "http://www.w3.org/2001/XMLSchema-instance"
GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"

NODE_COLUMNS = ["id", "base_word", "layer", "weight", "is_pillar", "community"]
EDGE_COLUMNS = ["source", "target", "weight", "kind"]

# (key, GEXF/GraphML type) for node attributes, in declaration order
_NODE_ATTRS = [
    ("base_word", "string"),
    ("layer", "integer"),
    ("layer_name", "string"),
    ("is_pillar", "boolean"),
    ("community", "integer"),
    ("weight", "integer"),
]
_GRAPHML_TYPES = {"string": "string", "integer": "int", "boolean": "boolean", "double": "double"}


@dataclass
class ExportConfig:
    formats: tuple = FORMATS
    layer_spacing: float = 100.0
    include_positions: bool = True
    output_dir: str = "out"

    def validate(self) -> list[str]:
        problems = []
        if not self.formats:
            problems.append("export.formats: at least one format must be selected")
        for f in self.formats:
            if f not in FORMATS:
                problems.append(f"export.formats: unknown format {f!r}")
        if isinstance(self.layer_spacing, bool) or not isinstance(self.layer_spacing, (int, float)) \
                or not self.layer_spacing > 0:
            problems.append("export.layer_spacing must be > 0")
        return problems


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _community_of(communities: Optional[CommunityAssignment], nid: str) -> int:
    if communities is None:
        return -1
    return communities.membership.get(nid, -1)


def _sorted_edges(g: MultilayerGraph) -> list[Edge]:
    return sorted(g.edges, key=lambda e: (e.source, e.target, e.kind))


def layer_positions(g: MultilayerGraph, layer_spacing: float = 100.0) -> dict[str, tuple[float, float, float]]:
    """Circle per layer (nodes by id, radius 10*sqrt(n)), z = layer * spacing."""
    pos = {}
    for spec in g.layers:
        ids = sorted(n.id for n in g.layer_nodes(spec.index))
        if not ids:
            continue
        radius = 10.0 * math.sqrt(len(ids))
        z = spec.index * layer_spacing
        for i, nid in enumerate(ids):
            theta = 2.0 * math.pi * i / len(ids)
            pos[nid] = (round(radius * math.cos(theta), 6), round(radius * math.sin(theta), 6), float(z))
    return pos


def _node_values(g: MultilayerGraph, communities, nid: str) -> dict[str, object]:
    n = g.nodes[nid]
    return {
        "base_word": n.base_word,
        "layer": n.layer,
        "layer_name": g.layers[n.layer].name,
        "is_pillar": n.is_pillar,
        "community": _community_of(communities, nid),
        "weight": n.weight,
    }


def _fmt(v) -> str:
    return _bool(v) if isinstance(v, bool) else str(v)


def _write_tree(root: ET.Element, path: Path) -> None:
    ET.indent(root, space="  ")
    try:
        ET.ElementTree(root).write(path, encoding="utf-8", xml_declaration=True)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _prepare_dir(path: Path) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {path.parent}: {exc}") from exc


def write_gexf(g: MultilayerGraph, communities: Optional[CommunityAssignment], cfg: ExportConfig,
               path: Optional[Path] = None) -> Path:
    """GEXF 1.3 with node/edge attributes and optional 3D viz positions."""
    path = Path(path or Path(cfg.output_dir) / "network.gexf")
    _prepare_dir(path)
    ET.register_namespace("", GEXF_NS)
    ET.register_namespace("viz", VIZ_NS)
    ET.register_namespace("xsi", XSI_NS)
    q = lambda tag: f"{{{GEXF_NS}}}{tag}"  # noqa: E731
    root = ET.Element(q("gexf"), {
        "version": "1.3",
        f"{{{XSI_NS}}}schemaLocation": f"{GEXF_NS} {GEXF_NS}/gexf.xsd",
    })
    meta = ET.SubElement(root, q("meta"))
    ET.SubElement(meta, q("creator")).text = "wordlayers"
    ET.SubElement(meta, q("description")).text = "temporal multilayer word co-occurrence network"
    graph = ET.SubElement(root, q("graph"), {"mode": "static", "defaultedgetype": "undirected"})

    nattrs = ET.SubElement(graph, q("attributes"), {"class": "node"})
    for i, (key, typ) in enumerate(_NODE_ATTRS):
        ET.SubElement(nattrs, q("attribute"), {"id": str(i), "title": key, "type": typ})
    eattrs = ET.SubElement(graph, q("attributes"), {"class": "edge"})
    ET.SubElement(eattrs, q("attribute"), {"id": "0", "title": "kind", "type": "string"})

    pos = layer_positions(g, cfg.layer_spacing) if cfg.include_positions else {}
    nodes_el = ET.SubElement(graph, q("nodes"))
    for nid in sorted(g.nodes):
        el = ET.SubElement(nodes_el, q("node"), {"id": nid, "label": g.nodes[nid].base_word})
        values = ET.SubElement(el, q("attvalues"))
        attrs = _node_values(g, communities, nid)
        for i, (key, _) in enumerate(_NODE_ATTRS):
            ET.SubElement(values, q("attvalue"), {"for": str(i), "value": _fmt(attrs[key])})
        if nid in pos:
            x, y, z = pos[nid]
            ET.SubElement(el, f"{{{VIZ_NS}}}position", {"x": repr(x), "y": repr(y), "z": repr(z)})

    edges_el = ET.SubElement(graph, q("edges"))
    for i, e in enumerate(_sorted_edges(g)):
        el = ET.SubElement(edges_el, q("edge"), {
            "id": str(i), "source": e.source, "target": e.target, "weight": str(e.weight),
        })
        values = ET.SubElement(el, q("attvalues"))
        ET.SubElement(values, q("attvalue"), {"for": "0", "value": e.kind})
    _write_tree(root, path)
    return path


def _coerce(value: str, typ: str):
    if typ == "integer":
        return int(value)
    if typ == "boolean":
        return value == "true"
    if typ == "double":
        return float(value)
    return value


def read_gexf(path) -> tuple[dict[str, dict], list[dict]]:
    """Parse a file written by :func:`write_gexf` into ``(nodes, edges)``.

    ``nodes`` maps id to attribute dict (plus ``position`` if present); each
    edge is a dict with source, target, weight and the edge attributes.
    """
    root = ET.parse(path).getroot()
    ns = {"g": GEXF_NS, "viz": VIZ_NS}
    graph = root.find("g:graph", ns)
    titles: dict[str, dict[str, tuple[str, str]]] = {"node": {}, "edge": {}}
    for block in graph.findall("g:attributes", ns):
        for a in block.findall("g:attribute", ns):
            titles[block.get("class")][a.get("id")] = (a.get("title"), a.get("type"))
    nodes = {}
    for el in graph.find("g:nodes", ns).findall("g:node", ns):
        attrs = {}
        for av in el.iterfind("g:attvalues/g:attvalue", ns):
            title, typ = titles["node"][av.get("for")]
            attrs[title] = _coerce(av.get("value"), typ)
        p = el.find("viz:position", ns)
        if p is not None:
            attrs["position"] = (float(p.get("x")), float(p.get("y")), float(p.get("z")))
        nodes[el.get("id")] = attrs
    edges = []
    for el in graph.find("g:edges", ns).findall("g:edge", ns):
        rec = {"source": el.get("source"), "target": el.get("target"), "weight": float(el.get("weight", "1"))}
        for av in el.iterfind("g:attvalues/g:attvalue", ns):
            title, typ = titles["edge"][av.get("for")]
            rec[title] = _coerce(av.get("value"), typ)
        edges.append(rec)
    return nodes, edges


def write_graphml(g: MultilayerGraph, communities: Optional[CommunityAssignment], cfg: ExportConfig,
                  path: Optional[Path] = None) -> Path:
    """GraphML with the same attributes as the GEXF export, without positions."""
    path = Path(path or Path(cfg.output_dir) / "network.graphml")
    _prepare_dir(path)
    ET.register_namespace("", GRAPHML_NS)
    q = lambda tag: f"{{{GRAPHML_NS}}}{tag}"  # noqa: E731
    root = ET.Element(q("graphml"))
    for key, typ in _NODE_ATTRS:
        ET.SubElement(root, q("key"), {"id": key, "for": "node", "attr.name": key, "attr.type": _GRAPHML_TYPES[typ]})
    ET.SubElement(root, q("key"), {"id": "e_weight", "for": "edge", "attr.name": "weight", "attr.type": "double"})
    ET.SubElement(root, q("key"), {"id": "e_kind", "for": "edge", "attr.name": "kind", "attr.type": "string"})
    graph = ET.SubElement(root, q("graph"), {"id": "G", "edgedefault": "undirected"})
    for nid in sorted(g.nodes):
        el = ET.SubElement(graph, q("node"), {"id": nid})
        for key, v in _node_values(g, communities, nid).items():
            ET.SubElement(el, q("data"), {"key": key}).text = _fmt(v)
    for i, e in enumerate(_sorted_edges(g)):
        el = ET.SubElement(graph, q("edge"), {"id": f"e{i}", "source": e.source, "target": e.target})
        ET.SubElement(el, q("data"), {"key": "e_weight"}).text = str(e.weight)
        ET.SubElement(el, q("data"), {"key": "e_kind"}).text = e.kind
    _write_tree(root, path)
    return path


def write_csv(g: MultilayerGraph, communities: Optional[CommunityAssignment], cfg: ExportConfig,
              out_dir: Optional[Path] = None) -> tuple[Path, Path]:
    """``nodes.csv`` sorted by id and ``edges.csv`` sorted by (source, target)."""
    out_dir = Path(out_dir or cfg.output_dir)
    nodes_path, edges_path = out_dir / "nodes.csv", out_dir / "edges.csv"
    _prepare_dir(nodes_path)
    try:
        with open(nodes_path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(NODE_COLUMNS)
            for nid in sorted(g.nodes):
                n = g.nodes[nid]
                w.writerow([nid, n.base_word, n.layer, n.weight, _bool(n.is_pillar), _community_of(communities, nid)])
        with open(edges_path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(EDGE_COLUMNS)
            for e in _sorted_edges(g):
                w.writerow([e.source, e.target, e.weight, e.kind])
    except OSError as exc:
        raise OutputError(f"cannot write CSV output in {out_dir}: {exc}") from exc
    return nodes_path, edges_path


def write_outputs(g, communities, cfg: ExportConfig) -> list[Path]:
    written = []
    if "gexf" in cfg.formats:
        written.append(write_gexf(g, communities, cfg))
    if "graphml" in cfg.formats:
        written.append(write_graphml(g, communities, cfg))
    if "csv" in cfg.formats:
        written.extend(write_csv(g, communities, cfg))
    return written


@dataclass
class LayerStats:
    name: str
    documents: int = 0
    vocabulary: int = 0
    nodes: int = 0
    edges: int = 0


@dataclass
class RunReport:
    total_documents: int = 0
    rejected_records: int = 0
    empty_text: int = 0
    dropped_outside_layers: int = 0
    duplicates_removed: int = 0
    layers: list[LayerStats] = field(default_factory=list)
    nodes_before_filter: int = 0
    intra_edges_before_filter: int = 0
    inter_edges_before_filter: int = 0
    final_nodes: int = 0
    final_intra_edges: int = 0
    final_inter_edges: int = 0
    communities: Optional[int] = None
    modularity: Optional[float] = None
    note: str = ""
    config: dict = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def final_edges(self) -> int:
        return self.final_intra_edges + self.final_inter_edges

    def lines(self) -> list[str]:
        out = [
            f"total_documents: {self.total_documents}",
            f"rejected_records: {self.rejected_records}",
            f"empty_text: {self.empty_text}",
            f"dropped_outside_layers: {self.dropped_outside_layers}",
            f"duplicates_removed: {self.duplicates_removed}",
        ]
        for i, ls in enumerate(self.layers):
            out += [
                f"layer.{i}.name: {ls.name}",
                f"layer.{i}.documents: {ls.documents}",
                f"layer.{i}.vocabulary: {ls.vocabulary}",
                f"layer.{i}.nodes: {ls.nodes}",
                f"layer.{i}.edges: {ls.edges}",
            ]
        out += [
            f"nodes_before_filter: {self.nodes_before_filter}",
            f"intra_edges_before_filter: {self.intra_edges_before_filter}",
            f"inter_edges_before_filter: {self.inter_edges_before_filter}",
            f"final_nodes: {self.final_nodes}",
            f"final_edges: {self.final_edges}",
            f"final_intra_edges: {self.final_intra_edges}",
            f"final_inter_edges: {self.final_inter_edges}",
        ]
        if self.communities is not None:
            out.append(f"communities: {self.communities}")
        if self.modularity is not None:
            out.append(f"modularity: {self.modularity:.12f}")
        if self.note:
            out.append(f"note: {self.note}")
        out += [f"config.{k}: {v}" for k, v in self.config.items()]
        out += [f"timing.{stage}_s: {secs:.4f}" for stage, secs in self.timings.items()]
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"


def write_report(report: RunReport, path) -> Path:
    path = Path(path)
    _prepare_dir(path)
    try:
        path.write_text(report.render(), encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write report {path}: {exc}") from exc
    return path


def parse_report(text: str) -> dict[str, str]:
    """``key: value`` lines back into a dict (values stay strings)."""
    out = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition(": ")
        out[key] = value
    return out
