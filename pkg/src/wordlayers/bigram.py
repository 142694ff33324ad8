"""Per-layer unigram and bigram frequency tables."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import chain, islice
from typing import Iterable, Sequence


def _tokens(stream) -> Sequence[str]:
    # accept TokenStream objects as well as bare token lists
    return getattr(stream, "tokens", stream)


def _pairs(tokens: Sequence[str]):
    return ((a, b) for a, b in zip(tokens, islice(tokens, 1, None)) if a != b)


def count_unigrams(streams: Iterable, document_frequency: bool = False) -> Counter:
    """Token counts over all streams (or per-document counts if ``document_frequency``)."""
    toks = (_tokens(s) for s in streams)
    if document_frequency:
        return Counter(chain.from_iterable(set(t) for t in toks))
    return Counter(chain.from_iterable(toks))


def count_bigrams(streams: Iterable, document_frequency: bool = False) -> Counter:
    """Counts of ordered adjacent pairs ``(w1, w2)`` with ``w1 != w2``, per document."""
    toks = (_tokens(s) for s in streams)
    if document_frequency:
        return Counter(chain.from_iterable(set(_pairs(t)) for t in toks))
    return Counter(chain.from_iterable(_pairs(t) for t in toks))


@dataclass
class BigramTable:
    layer: int
    unigram_counts: Counter = field(default_factory=Counter)
    bigram_counts: Counter = field(default_factory=Counter)
    documents: int = 0

    @classmethod
    def from_streams(cls, layer: int, streams: Sequence, document_frequency: bool = False) -> "BigramTable":
        streams = list(streams)
        return cls(
            layer,
            count_unigrams(streams, document_frequency),
            count_bigrams(streams, document_frequency),
            len(streams),
        )

    def merge(self, other: "BigramTable") -> "BigramTable":
        """Sum two shard tables of the same layer into a new table."""
        if other.layer != self.layer:
            raise ValueError(f"cannot merge layer {other.layer} into layer {self.layer}")
        uni = Counter(self.unigram_counts)
        uni.update(other.unigram_counts)
        bi = Counter(self.bigram_counts)
        bi.update(other.bigram_counts)
        return BigramTable(self.layer, uni, bi, self.documents + other.documents)

    def absorb(self, other: "BigramTable") -> None:
        """In-place version of :meth:`merge`."""
        if other.layer != self.layer:
            raise ValueError(f"cannot merge layer {other.layer} into layer {self.layer}")
        self.unigram_counts.update(other.unigram_counts)
        self.bigram_counts.update(other.bigram_counts)
        self.documents += other.documents

    def __eq__(self, other) -> bool:
        if not isinstance(other, BigramTable):
            return NotImplemented
        return (
            self.layer == other.layer
            and dict(self.unigram_counts) == dict(other.unigram_counts)
            and dict(self.bigram_counts) == dict(other.bigram_counts)
            and self.documents == other.documents
        )


def merge_tables(tables: Iterable[BigramTable]) -> dict[int, BigramTable]:
    """Merge shard tables by layer."""
    out: dict[int, BigramTable] = {}
    for t in tables:
        out[t.layer] = out[t.layer].merge(t) if t.layer in out else t
    return out


def sorted_bigrams(table: BigramTable) -> list[tuple[str, str, int]]:
    return sorted(
        ((a, b, c) for (a, b), c in table.bigram_counts.items()),
        key=lambda r: (-r[2], r[0], r[1]),
    )


def write_bigram_tsv(table: BigramTable, path) -> None:
    """Debug dump: ``w1<TAB>w2<TAB>count``, count descending then lexicographic."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for a, b, c in sorted_bigrams(table):
            fh.write(f"{a}\t{b}\t{c}\n")
