"""Corpus ingestion: parse JSONL/CSV dumps and split documents into time layers."""

from __future__ import annotations

import csv
import io
import json
import logging
import unicodedata
from dataclasses import dataclass, field
from datetime import date, datetime, timedelta, timezone
from typing import IO, Iterable, Iterator, Mapping, Optional, Sequence

from .errors import ConfigError, InputError

logger = logging.getLogger(__name__)

FORMATS = ("jsonl", "csv")

DEFAULT_FIELDS = {"id": "id", "text": "text", "timestamp": "created_at"}

_MONTHS = {
    m: i + 1
    for i, m in enumerate(
        ["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"]
    )
}


@dataclass(frozen=True, slots=True)
class Document:
    id: str
    text: str
    timestamp: datetime


@dataclass(frozen=True)
class LayerSpec:
    """A named, inclusive date window; ``suffix`` tags node ids of this layer."""

    index: int
    name: str
    start: date
    end: date
    suffix: str = ""

    def contains(self, day: date) -> bool:
        return self.start <= day <= self.end

    @property
    def window(self) -> tuple[datetime, datetime]:
        lo = datetime(self.start.year, self.start.month, self.start.day, tzinfo=timezone.utc)
        hi = datetime(self.end.year, self.end.month, self.end.day, 23, 59, 59, tzinfo=timezone.utc)
        return lo, hi


# Tournament stages of the 2022 World Cup, with the per-stage id symbols.
WORLDCUP_2022_LAYERS = (
    LayerSpec(0, "Group stage", date(2022, 11, 20), date(2022, 12, 2), ""),
    LayerSpec(1, "Round of 16", date(2022, 12, 3), date(2022, 12, 6), "^"),
    LayerSpec(2, "Quarter-finals", date(2022, 12, 9), date(2022, 12, 10), "*"),
    LayerSpec(3, "Semi-finals", date(2022, 12, 13), date(2022, 12, 14), "†"),
    LayerSpec(4, "Final", date(2022, 12, 17), date(2022, 12, 18), "‡"),
)


@dataclass
class ParseStats:
    """Per-source tallies kept by :func:`parse_corpus`."""

    parsed: int = 0
    rejects: int = 0
    empty_text: int = 0
    reasons: dict[str, int] = field(default_factory=dict)

    def reject(self, reason: str) -> None:
        self.rejects += 1
        self.reasons[reason] = self.reasons.get(reason, 0) + 1

    def merge(self, other: "ParseStats") -> None:
        self.parsed += other.parsed
        self.rejects += other.rejects
        self.empty_text += other.empty_text
        for k, v in other.reasons.items():
            self.reasons[k] = self.reasons.get(k, 0) + v


def _is_suffix_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in "PS"


def validate_layers(layers: Sequence[LayerSpec]) -> list[str]:
    """Return a list of human-readable violations (empty when the list is valid)."""
    problems = []
    if not layers:
        problems.append("layers: at least one layer is required")
    for pos, layer in enumerate(layers):
        if layer.index != pos:
            problems.append(f"layers[{pos}] ({layer.name!r}): index is {layer.index}, expected {pos}")
        if layer.start > layer.end:
            problems.append(f"layers[{pos}] ({layer.name!r}): start {layer.start} is after end {layer.end}")
        if any(not _is_suffix_char(c) for c in layer.suffix):
            problems.append(
                f"layers[{pos}] ({layer.name!r}): suffix {layer.suffix!r} must contain only "
                "punctuation or symbol characters"
            )
    for a, b in zip(layers, layers[1:]):
        if b.start < a.start:
            problems.append(f"layers: {b.name!r} starts before {a.name!r}; layers must be sorted by start")
        if b.start <= a.end and a.start <= b.end:
            problems.append(f"layers: {a.name!r} and {b.name!r} overlap")
    seen: dict[str, str] = {}
    empties = []
    for layer in layers:
        if layer.suffix == "":
            empties.append(layer.name)
        elif layer.suffix in seen:
            problems.append(
                f"layers: duplicate suffix {layer.suffix!r} on {seen[layer.suffix]!r} and {layer.name!r}"
            )
        else:
            seen[layer.suffix] = layer.name
    if len(empties) > 1:
        problems.append("layers: empty suffix used by more than one layer: " + ", ".join(map(repr, empties)))
    return problems


def _parse_twitter(s: str) -> datetime:
    # "Sun Nov 20 12:00:00 +0000 2022"
    parts = s.split()
    if len(parts) != 6:
        raise ValueError(f"bad timestamp {s!r}")
    _, mon, day, hms, off, year = parts
    hh, mm, ss = (int(x) for x in hms.split(":"))
    if len(off) != 5 or off[0] not in "+-":
        raise ValueError(f"bad utc offset in {s!r}")
    delta = timedelta(hours=int(off[1:3]), minutes=int(off[3:5]))
    tz = timezone(delta if off[0] == "+" else -delta)
    dt = datetime(int(year), _MONTHS[mon.lower()], int(day), hh, mm, ss, tzinfo=tz)
    return dt.astimezone(timezone.utc)


def parse_timestamp(value: str) -> datetime:
    """Parse ISO-8601 or classic Twitter ``created_at`` into an aware UTC datetime.

    Naive timestamps are taken as UTC. Sub-second parts are truncated.
    """
    s = value.strip()
    if not s:
        raise ValueError("empty timestamp")
    if s[0].isdigit():
        if s.endswith(("Z", "z")):
            s = s[:-1] + "+00:00"
        dt = datetime.fromisoformat(s)
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        else:
            dt = dt.astimezone(timezone.utc)
    else:
        dt = _parse_twitter(s)
    return dt.replace(microsecond=0)


def _make_document(rec: Mapping, fields: Mapping[str, str], stats: ParseStats) -> Optional[Document]:
    try:
        raw_id = rec[fields["id"]]
        text = rec[fields["text"]]
        raw_ts = rec[fields["timestamp"]]
    except (KeyError, TypeError):
        stats.reject("missing field")
        return None
    if raw_id is None or raw_ts is None or not isinstance(text, str):
        stats.reject("missing field")
        return None
    if isinstance(raw_id, bool) or not isinstance(raw_id, (str, int)):
        stats.reject("bad id")
        return None
    try:
        ts = parse_timestamp(str(raw_ts))
    except (ValueError, KeyError, OverflowError):
        stats.reject("bad timestamp")
        return None
    if not text.strip():
        stats.empty_text += 1
        return None
    stats.parsed += 1
    return Document(str(raw_id), text, ts)


def _iter_jsonl(source: IO[bytes], fields, stats) -> Iterator[Document]:
    for line in source:
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except ValueError:
            stats.reject("malformed json")
            continue
        if not isinstance(rec, dict):
            stats.reject("not an object")
            continue
        doc = _make_document(rec, fields, stats)
        if doc is not None:
            yield doc


def _has_surrogate(s: str) -> bool:
    try:
        s.encode("utf-8")
    except UnicodeEncodeError:
        return True
    return False


def _iter_csv(source: IO[bytes], fields, stats) -> Iterator[Document]:
    # surrogateescape keeps decoding going; rows carrying bad bytes are rejected below
    text = io.TextIOWrapper(source, encoding="utf-8", errors="surrogateescape", newline="")
    reader = csv.DictReader(text)
    header = reader.fieldnames
    if header is None:
        return
    missing = [f"{role}={col!r}" for role, col in fields.items() if col not in header]
    if missing:
        raise ConfigError("input.fields: CSV header lacks column(s) " + ", ".join(missing))
    for row in reader:
        if None in row or any(v is None for v in row.values()):
            stats.reject("wrong field count")
            continue
        if any(_has_surrogate(v) for v in row.values() if isinstance(v, str)):
            stats.reject("invalid utf-8")
            continue
        doc = _make_document(row, fields, stats)
        if doc is not None:
            yield doc


def parse_corpus(
    source: IO[bytes],
    format: str = "jsonl",
    fields: Optional[Mapping[str, str]] = None,
    stats: Optional[ParseStats] = None,
) -> Iterator[Document]:
    """Yield documents from a binary stream in input order.

    Bad records are skipped and tallied in ``stats``. ``fields`` maps the roles
    ``id``, ``text`` and ``timestamp`` to record keys / CSV column names.
    """
    if format not in FORMATS:
        raise ConfigError(f"input.format: unknown format {format!r} (expected one of {', '.join(FORMATS)})")
    fields = {**DEFAULT_FIELDS, **(fields or {})}
    stats = stats if stats is not None else ParseStats()
    it = _iter_jsonl if format == "jsonl" else _iter_csv
    try:
        yield from it(source, fields, stats)
    except OSError as exc:
        raise InputError(f"read failed: {exc}") from exc


def read_corpus_file(
    path, format: str = "jsonl", fields=None, stats: Optional[ParseStats] = None
) -> Iterator[Document]:
    """Open ``path`` and stream its documents (see :func:`parse_corpus`)."""
    if format not in FORMATS:
        raise ConfigError(f"input.format: unknown format {format!r}")
    try:
        fh = open(path, "rb")
    except OSError as exc:
        raise InputError(f"cannot open input {path}: {exc}") from exc
    with fh:
        yield from parse_corpus(fh, format, fields, stats)


def assign_layer(doc: Document, layers: Sequence[LayerSpec]) -> Optional[int]:
    """Index of the layer whose window holds ``doc.timestamp``, or None."""
    day = doc.timestamp.astimezone(timezone.utc).date()
    for layer in layers:
        if layer.start <= day <= layer.end:
            return layer.index
    return None


def partition_documents(
    docs: Iterable[Document], layers: Sequence[LayerSpec]
) -> tuple[dict[int, list[Document]], int]:
    """Group documents by layer. Returns ``(by_layer, dropped)``."""
    by_layer: dict[int, list[Document]] = {layer.index: [] for layer in layers}
    dropped = 0
    for doc in docs:
        idx = assign_layer(doc, layers)
        if idx is None:
            dropped += 1
        else:
            by_layer[idx].append(doc)
    return by_layer, dropped
