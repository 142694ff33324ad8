"""End-to-end pipeline: ingest -> normalize -> bigram -> layergraph -> multilayer -> community -> export."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .bigram import BigramTable, count_bigrams, count_unigrams
from .community import CommunityAssignment, best_louvain
from .config import PipelineConfig, validate
from .errors import ConfigError, StorageError
from .export import LayerStats, RunReport, write_outputs, write_report
from .ingest import ParseStats, assign_layer, read_corpus_file
from .layergraph import build_layer_graph, select_top_k
from .multilayer import MultilayerGraph, assemble, giant_component
from .normalize import StopwordSet, load_stopword_sources, normalize_text

logger = logging.getLogger(__name__)

CHUNK_DOCS = 2_000

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INPUT = 3
EXIT_EMPTY = 4


@dataclass
class PipelineResult:
    graph: MultilayerGraph
    communities: Optional[CommunityAssignment]
    report: RunReport
    exit_code: int = EXIT_OK
    outputs: list[Path] = field(default_factory=list)


def count_chunk(chunk: list[tuple[int, str]], stops: StopwordSet, document_frequency: bool = False):
    """Normalize and count one shard of ``(layer, text)`` pairs.

    Returns ``(tables_by_layer, normalize_seconds, count_seconds)``.
    """
    t0 = time.perf_counter()
    streams: dict[int, list[list[str]]] = {}
    for layer, text in chunk:
        streams.setdefault(layer, []).append(normalize_text(text, stops))
    t1 = time.perf_counter()
    tables = {
        layer: BigramTable(
            layer,
            count_unigrams(toks, document_frequency),
            count_bigrams(toks, document_frequency),
            len(toks),
        )
        for layer, toks in sorted(streams.items())
    }
    return tables, t1 - t0, time.perf_counter() - t1


def _count_job(args):
    return count_chunk(*args)


class _Counter:
    """Runs ``count_chunk`` inline or on a process pool and merges in submission order."""

    def __init__(self, stops: StopwordSet, document_frequency: bool, threads: int):
        self.args = (stops, document_frequency)
        self.pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
        self.pending: list = []

    def submit(self, chunk):
        if not chunk:
            return
        if self.pool is None:
            self.pending.append(count_chunk(chunk, *self.args))
        else:
            self.pending.append(self.pool.submit(_count_job, (chunk, *self.args)))

    def results(self):
        try:
            for p in self.pending:
                yield p if self.pool is None else p.result()
        finally:
            if self.pool is not None:
                self.pool.shutdown()

    def close(self):
        if self.pool is not None:
            self.pool.shutdown(cancel_futures=True)


def _fail_report(report: RunReport, cfg: PipelineConfig, note: str) -> None:
    report.note = note
    try:
        write_report(report, Path(cfg.export.output_dir) / "report.txt")
    except StorageError:
        logger.error("could not write report after failure")


def run_pipeline(cfg: PipelineConfig, threads: int = 1, chunk_docs: int = CHUNK_DOCS) -> PipelineResult:
    """Execute every stage in order; outputs land in ``cfg.export.output_dir``.

    Raises ConfigError for invalid configs and StorageError for I/O failures
    (after trying to write a partial report). An empty giant component is not an
    exception: the result carries ``exit_code == EXIT_EMPTY``.
    """
    problems = validate(cfg)
    if problems:
        raise ConfigError("; ".join(problems))
    threads = max(1, int(threads))
    report = RunReport(config=cfg.echo())
    report.layers = [LayerStats(layer.name) for layer in cfg.layers]
    timings = report.timings

    try:
        stops = load_stopword_sources(cfg.stopwords, cfg.extra_stopwords)
    except OSError as exc:
        raise ConfigError(f"text.stopwords: {exc}") from exc

    # ingest + normalize + bigram: documents stream through in fixed-size shards
    t_start = time.perf_counter()
    stats = ParseStats()
    counter = _Counter(stops, cfg.document_frequency, threads)
    seen: set = set()
    chunk: list[tuple[int, str]] = []
    t_norm = t_count = 0.0
    try:
        for path in cfg.inputs:
            for doc in read_corpus_file(path, cfg.input_format, cfg.fields, stats):
                idx = assign_layer(doc, cfg.layers)
                if idx is None:
                    report.dropped_outside_layers += 1
                    continue
                if cfg.dedupe:
                    key = (idx, doc.text)
                    if key in seen:
                        report.duplicates_removed += 1
                        continue
                    seen.add(key)
                report.layers[idx].documents += 1
                chunk.append((idx, doc.text))
                if len(chunk) >= chunk_docs:
                    counter.submit(chunk)
                    chunk = []
            logger.info("read %s: %d documents so far, %d rejects", path, stats.parsed, stats.rejects)
        counter.submit(chunk)
        t_ingest_end = time.perf_counter()
        tables = {layer.index: BigramTable(layer.index) for layer in cfg.layers}
        for part, tn, tc in counter.results():
            t_norm += tn
            t_count += tc
            for idx, t in part.items():
                tables[idx].absorb(t)
    except StorageError as exc:
        counter.close()
        report.total_documents = stats.parsed
        report.rejected_records = stats.rejects
        _fail_report(report, cfg, f"error: {exc}")
        raise
    except BaseException:
        counter.close()
        raise
    report.total_documents = stats.parsed
    report.rejected_records = stats.rejects
    report.empty_text = stats.empty_text
    t_merge = time.perf_counter() - t_ingest_end
    read_loop = t_ingest_end - t_start
    # inline shards run inside the read loop, so their time is carved out of ingest;
    # pooled shards report summed worker time
    timings["ingest"] = read_loop - (t_norm + t_count) if threads == 1 else read_loop
    timings["normalize"] = t_norm
    timings["bigram"] = t_count + t_merge
    logger.info("ingested %d documents (%d outside layers)", stats.parsed, report.dropped_outside_layers)

    t = time.perf_counter()
    graphs = []
    for layer in cfg.layers:
        table = tables[layer.index]
        nodes = select_top_k(table.unigram_counts, cfg.top_k, cfg.pillars) if table.unigram_counts else set()
        lg = build_layer_graph(table, nodes, cfg.pillars, cfg.min_edge_weight)
        ls = report.layers[layer.index]
        ls.vocabulary = len(table.unigram_counts)
        ls.nodes = len(lg.nodes)
        ls.edges = len(lg.edges)
        graphs.append(lg)
    timings["layergraph"] = time.perf_counter() - t

    t = time.perf_counter()
    full = assemble(graphs, cfg.layers, cfg.pillars, cfg.coupling)
    report.nodes_before_filter = len(full.nodes)
    report.intra_edges_before_filter = len(full.intra_edges)
    report.inter_edges_before_filter = len(full.inter_edges)
    giant = giant_component(full)
    report.final_nodes = len(giant.nodes)
    report.final_intra_edges = len(giant.intra_edges)
    report.final_inter_edges = len(giant.inter_edges)
    timings["multilayer"] = time.perf_counter() - t
    logger.info("supra-graph %d nodes; giant component %d nodes, %d edges",
                len(full.nodes), len(giant.nodes), len(giant.edges))

    t = time.perf_counter()
    communities = None
    exit_code = EXIT_OK
    if giant.nodes:
        communities = best_louvain(
            giant.weighted_graph(cfg.community_inter_edges),
            cfg.resolution, cfg.seed, cfg.n_restarts, threads,
        )
        report.communities = communities.n_communities
        report.modularity = communities.q
    else:
        exit_code = EXIT_EMPTY
        report.note = "empty corpus" if report.total_documents == 0 else "empty giant component"
    timings["community"] = time.perf_counter() - t

    t = time.perf_counter()
    try:
        outputs = write_outputs(giant, communities, cfg.export)
    except StorageError as exc:
        _fail_report(report, cfg, f"error: {exc}")
        raise
    timings["export"] = time.perf_counter() - t
    outputs.append(write_report(report, Path(cfg.export.output_dir) / "report.txt"))
    return PipelineResult(giant, communities, report, exit_code, outputs)
