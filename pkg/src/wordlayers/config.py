"""Pipeline configuration: TOML loading, defaults and validation."""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field, replace
from datetime import date
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError
from .export import ExportConfig
from .ingest import DEFAULT_FIELDS, FORMATS, WORLDCUP_2022_LAYERS, LayerSpec, validate_layers
from .multilayer import COUPLINGS
from .normalize import BUILTIN

DEFAULT_PILLARS = ("world", "fifa", "team")


@dataclass
class PipelineConfig:
    inputs: list[str] = field(default_factory=list)
    input_format: str = "jsonl"
    fields: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_FIELDS))
    dedupe: bool = False
    layers: list[LayerSpec] = field(default_factory=lambda: list(WORLDCUP_2022_LAYERS))
    stopwords: list[str] = field(default_factory=lambda: [BUILTIN])
    extra_stopwords: list[str] = field(default_factory=list)
    top_k: int = 300
    pillars: list[str] = field(default_factory=lambda: list(DEFAULT_PILLARS))
    coupling: str = "consecutive"
    min_edge_weight: int = 1
    document_frequency: bool = False
    resolution: float = 1.0
    seed: int = 42
    n_restarts: int = 1
    community_inter_edges: bool = True
    export: ExportConfig = field(default_factory=ExportConfig)

    def echo(self) -> dict[str, str]:
        """Flat ``key -> value`` view for the run report."""
        out = {
            "inputs": ", ".join(self.inputs) or "(none)",
            "input_format": self.input_format,
            "fields": ", ".join(f"{k}={v}" for k, v in self.fields.items()),
            "dedupe": str(self.dedupe).lower(),
        }
        for layer in self.layers:
            out[f"layers.{layer.index}"] = f"{layer.name} | {layer.start} | {layer.end} | {layer.suffix!r}"
        out.update({
            "stopwords": ", ".join(self.stopwords) or "(none)",
            "extra_stopwords": ", ".join(self.extra_stopwords) or "(none)",
            "top_k": str(self.top_k),
            "pillars": ", ".join(self.pillars),
            "coupling": self.coupling,
            "min_edge_weight": str(self.min_edge_weight),
            "document_frequency": str(self.document_frequency).lower(),
            "resolution": repr(self.resolution),
            "seed": str(self.seed),
            "n_restarts": str(self.n_restarts),
            "community_inter_edges": str(self.community_inter_edges).lower(),
            "export.formats": ", ".join(self.export.formats),
            "export.layer_spacing": repr(self.export.layer_spacing),
            "export.include_positions": str(self.export.include_positions).lower(),
            "export.output_dir": str(self.export.output_dir),
        })
        return out


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def validate(cfg: PipelineConfig) -> list[str]:
    """All config violations; an empty list means the config is runnable."""
    problems = []
    if cfg.input_format not in FORMATS:
        problems.append(f"input.format must be one of {', '.join(FORMATS)}, got {cfg.input_format!r}")
    for role in DEFAULT_FIELDS:
        if not isinstance(cfg.fields.get(role), str) or not cfg.fields.get(role):
            problems.append(f"input.fields.{role} must be a non-empty string")
    problems += validate_layers(cfg.layers)
    if not _is_int(cfg.top_k) or cfg.top_k < 1:
        problems.append("top_k must be ≥ 1")
    if not all(isinstance(p, str) and p.strip() for p in cfg.pillars):
        problems.append("pillars must be non-empty strings")
    if cfg.coupling not in COUPLINGS:
        problems.append(f"coupling must be one of {', '.join(COUPLINGS)}, got {cfg.coupling!r}")
    if not _is_int(cfg.min_edge_weight) or cfg.min_edge_weight < 1:
        problems.append("min_edge_weight must be ≥ 1")
    if not _is_num(cfg.resolution) or not cfg.resolution > 0:
        problems.append("resolution must be > 0")
    if not _is_int(cfg.seed):
        problems.append("seed must be an integer")
    if not _is_int(cfg.n_restarts) or cfg.n_restarts < 1:
        problems.append("n_restarts must be ≥ 1")
    problems += cfg.export.validate()
    return problems


_SECTIONS = {
    "input": {"paths", "format", "fields", "dedupe"},
    "layers": None,
    "text": {"stopwords", "extra_stopwords"},
    "graph": {"top_k", "pillars", "coupling", "min_edge_weight", "document_frequency"},
    "community": {"resolution", "seed", "n_restarts", "include_inter_edges"},
    "export": {"formats", "layer_spacing", "include_positions", "output_dir"},
}


def _parse_date(v: Any, where: str) -> date:
    if isinstance(v, date):
        return v
    if isinstance(v, str):
        try:
            return date.fromisoformat(v)
        except ValueError:
            pass
    raise ConfigError(f"{where}: expected a YYYY-MM-DD date, got {v!r}")


def _resolve(path: str, base: Optional[Path]) -> str:
    if path == BUILTIN or base is None or Path(path).is_absolute():
        return path
    return os.path.normpath(base / path)


def from_dict(data: dict, base_dir: Optional[Path] = None) -> PipelineConfig:
    """Build a config from parsed TOML. Relative paths resolve against ``base_dir``.

    Structural problems (unknown keys, wrong shapes) raise ConfigError; value
    checks are left to :func:`validate`.
    """
    unknown = [k for k in data if k not in _SECTIONS]
    if unknown:
        raise ConfigError(f"unknown config section(s): {', '.join(unknown)}")
    for name, keys in _SECTIONS.items():
        section = data.get(name)
        if keys is None or section is None:
            continue
        if not isinstance(section, dict):
            raise ConfigError(f"[{name}] must be a table")
        extra = set(section) - keys
        if extra:
            raise ConfigError(f"unknown key(s) in [{name}]: {', '.join(sorted(extra))}")

    cfg = PipelineConfig()
    inp = data.get("input", {})
    if "paths" in inp:
        cfg.inputs = [_resolve(p, base_dir) for p in inp["paths"]]
    cfg.input_format = inp.get("format", cfg.input_format)
    if "fields" in inp:
        cfg.fields = {**DEFAULT_FIELDS, **inp["fields"]}
    cfg.dedupe = inp.get("dedupe", cfg.dedupe)

    if "layers" in data:
        raw = data["layers"]
        if not isinstance(raw, list):
            raise ConfigError("layers must be an array of tables ([[layers]])")
        layers = []
        for i, entry in enumerate(raw):
            extra = set(entry) - {"name", "start", "end", "suffix"}
            if extra:
                raise ConfigError(f"layers[{i}]: unknown key(s) {', '.join(sorted(extra))}")
            try:
                name = entry["name"]
                start = _parse_date(entry["start"], f"layers[{i}].start")
                end = _parse_date(entry["end"], f"layers[{i}].end")
            except KeyError as exc:
                raise ConfigError(f"layers[{i}]: missing key {exc.args[0]!r}") from None
            layers.append(LayerSpec(i, str(name), start, end, str(entry.get("suffix", ""))))
        cfg.layers = layers

    text = data.get("text", {})
    if "stopwords" in text:
        sw = text["stopwords"]
        sw = [sw] if isinstance(sw, str) else list(sw)
        cfg.stopwords = [_resolve(s, base_dir) for s in sw]
    cfg.extra_stopwords = list(text.get("extra_stopwords", cfg.extra_stopwords))

    graph = data.get("graph", {})
    cfg.top_k = graph.get("top_k", cfg.top_k)
    if "pillars" in graph:
        cfg.pillars = list(graph["pillars"])
    cfg.coupling = graph.get("coupling", cfg.coupling)
    cfg.min_edge_weight = graph.get("min_edge_weight", cfg.min_edge_weight)
    cfg.document_frequency = graph.get("document_frequency", cfg.document_frequency)

    comm = data.get("community", {})
    cfg.resolution = comm.get("resolution", cfg.resolution)
    cfg.seed = comm.get("seed", cfg.seed)
    cfg.n_restarts = comm.get("n_restarts", cfg.n_restarts)
    cfg.community_inter_edges = comm.get("include_inter_edges", cfg.community_inter_edges)

    exp = data.get("export", {})
    cfg.export = ExportConfig(
        formats=tuple(exp.get("formats", cfg.export.formats)),
        layer_spacing=exp.get("layer_spacing", cfg.export.layer_spacing),
        include_positions=exp.get("include_positions", cfg.export.include_positions),
        output_dir=_resolve(exp["output_dir"], base_dir) if "output_dir" in exp else cfg.export.output_dir,
    )
    cfg.pillars = [p.lower() if isinstance(p, str) else p for p in cfg.pillars]
    return cfg


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return from_dict(data, path.parent)


def with_overrides(cfg: PipelineConfig, **overrides) -> PipelineConfig:
    """Copy of ``cfg`` with top-level or ``export.*`` fields replaced (None = keep)."""
    export_keys = {"formats", "output_dir", "layer_spacing", "include_positions"}
    top = {k: v for k, v in overrides.items() if v is not None and k not in export_keys}
    exp = {k: v for k, v in overrides.items() if v is not None and k in export_keys}
    out = replace(cfg, **top)
    if exp:
        out.export = replace(cfg.export, **exp)
    return out
