"""Text normalization: tokenizer and stop-word filtering."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

BUILTIN = "builtin"

_URL_PREFIXES = ("http://", "https://", "www.")


def _strip_edges(piece: str) -> str:
    # punctuation (P*) and symbols (S*) count as strippable; '#' and '@' are both Po
    cat = unicodedata.category
    i, j = 0, len(piece)
    while i < j and cat(piece[i])[0] in "PS":
        i += 1
    while j > i and cat(piece[j - 1])[0] in "PS":
        j -= 1
    return piece[i:j]


def tokenize(text: str) -> list[str]:
    """Split ``text`` into lowercase word tokens.

    Pieces are whitespace-delimited. Edge punctuation is stripped (so hashtag
    and mention sigils go too), URLs are dropped, and pieces with no letter at
    all (numbers, scores, punctuation runs) are dropped.
    """
    out = []
    for piece in text.split():
        if piece.isalpha():
            out.append(piece.lower())
            continue
        piece = _strip_edges(piece)
        if not piece:
            continue
        low = piece.lower()
        if low.startswith(_URL_PREFIXES):
            continue
        if not any(c.isalpha() for c in piece):
            continue
        out.append(low)
    return out


@dataclass(frozen=True)
class StopwordSet:
    words: frozenset
    source: str = BUILTIN

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    def union(self, other: "StopwordSet") -> "StopwordSet":
        return StopwordSet(self.words | other.words, f"{self.source}+{other.source}")


def parse_stopword_lines(lines: Iterable[str]) -> frozenset:
    words = set()
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return frozenset(words)


def builtin_stopwords() -> StopwordSet:
    text = resources.files("wordlayers.data").joinpath("stopwords_en.txt").read_text("utf-8")
    return StopwordSet(parse_stopword_lines(text.splitlines()), BUILTIN)


def load_stopwords(source: str | Path) -> StopwordSet:
    """Load a stop-word file, or the bundled list when ``source == "builtin"``."""
    if str(source) == BUILTIN:
        return builtin_stopwords()
    with open(source, encoding="utf-8") as fh:
        return StopwordSet(parse_stopword_lines(fh), str(source))


def load_stopword_sources(sources: Sequence[str | Path], extra: Iterable[str] = ()) -> StopwordSet:
    """Union of several stop-word sources plus inline ``extra`` words."""
    words: set = set()
    names = []
    for src in sources:
        s = load_stopwords(src)
        words |= s.words
        names.append(s.source)
    extra = [w.lower() for w in extra]
    if extra:
        words.update(extra)
        names.append("inline")
    return StopwordSet(frozenset(words), "+".join(names) or "none")


def remove_stopwords(tokens: Sequence[str], stops: StopwordSet | frozenset | set) -> list[str]:
    words = stops.words if isinstance(stops, StopwordSet) else stops
    return [t for t in tokens if t not in words]


@dataclass(frozen=True)
class TokenStream:
    doc_id: str
    layer: int
    tokens: tuple


def normalize_text(text: str, stops: StopwordSet) -> list[str]:
    """tokenize + remove_stopwords in one call."""
    words = stops.words
    return [t for t in tokenize(text) if t not in words]
