"""Temporal multilayer word co-occurrence networks from timestamped text."""

from .bigram import BigramTable, count_bigrams, count_unigrams
from .community import CommunityAssignment, WeightedGraph, louvain, modularity
from .config import PipelineConfig, load_config, validate
from .ingest import Document, LayerSpec, WORLDCUP_2022_LAYERS, assign_layer, parse_corpus, parse_timestamp
from .layergraph import LayerGraph, build_layer_graph, select_top_k
from .multilayer import MultilayerGraph, SupraNode, add_pillar_edges, disambiguate, giant_component
from .normalize import StopwordSet, load_stopwords, remove_stopwords, tokenize
from .pipeline import run_pipeline

__version__ = "0.1.0"
