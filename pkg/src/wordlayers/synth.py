"""Deterministic synthetic tweet-like corpora for tests, demos and benchmarks.

Run ``python -m wordlayers.synth --docs 5000 --out corpus.jsonl``.
"""

from __future__ import annotations

import argparse
import json
import random
from datetime import datetime, timedelta, timezone
from itertools import product
from typing import Iterator, Optional

_ONSETS = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "br", "st", "tr", "gl"]
_VOWELS = ["a", "e", "i", "o", "u", "ai", "ou"]
_FILLER = ["the", "a", "and", "of", "to", "is", "in", "for", "this", "that", "what", "was", "so", "with"]
_PILLARS = ["World", "fifa", "Team"]
_TAGS = ["#FIFAWorldCup", "#Qatar2022"]
_TWITTER_FMT = "%a %b %d %H:%M:%S +0000 %Y"

START = datetime(2022, 11, 18, tzinfo=timezone.utc)
END = datetime(2022, 12, 21, tzinfo=timezone.utc)


def pseudo_words(n: int, seed: int = 0) -> list[str]:
    """``n`` distinct pronounceable non-English words."""
    syll = [o + v for o, v in product(_ONSETS, _VOWELS)]
    rng = random.Random(seed)
    words: list[str] = []
    seen = set()
    while len(words) < n:
        w = "".join(rng.choice(syll) for _ in range(rng.choice((2, 2, 3))))
        if w not in seen:
            seen.add(w)
            words.append(w)
    return words


def generate(n_docs: int, seed: int = 0, tokens_per_doc: int = 15, vocab_size: int = 3000,
             start: datetime = START, end: datetime = END) -> Iterator[dict]:
    """Yield ``n_docs`` records ``{id, text, created_at}`` with timestamps in ``[start, end)``.

    Each calendar day has its own topic vocabulary so consecutive stages differ;
    a Zipf background, stop words, pillar words, hashtags, mentions, URLs and
    scores are mixed in to exercise the tokenizer.
    """
    rng = random.Random(seed)
    vocab = pseudo_words(vocab_size, seed)
    zipf = [1.0 / (r + 1) for r in range(vocab_size)]
    cum = []
    acc = 0.0
    for z in zipf:
        acc += z
        cum.append(acc)
    days = (end - start).days
    topics = [rng.sample(vocab[: vocab_size // 2], 40) for _ in range(days)]
    span = int((end - start).total_seconds())
    for i in range(n_docs):
        ts = start + timedelta(seconds=rng.randrange(span))
        topic = topics[(ts - start).days]
        n_topic = tokens_per_doc // 2
        words = rng.sample(topic, n_topic)
        words += rng.choices(vocab, cum_weights=cum, k=tokens_per_doc - n_topic - 3)
        words += rng.choices(_FILLER, k=3)
        if rng.random() < 0.6:
            words.insert(rng.randrange(len(words) + 1), rng.choice(_PILLARS))
        if rng.random() < 0.3:
            words[0] = words[0].capitalize()
        if rng.random() < 0.2:
            words[-1] += rng.choice(["!", "!!", "?", "...", ","])
        extras = []
        if rng.random() < 0.5:
            extras.append(rng.choice(_TAGS))
        if rng.random() < 0.2:
            extras.append(f"@user{rng.randrange(500)}")
        if rng.random() < 0.15:
            extras.append(f"https://t.co/{rng.randrange(10**8):x}")
        if rng.random() < 0.1:
            extras.append(f"{rng.randrange(5)}-{rng.randrange(5)}")
        text = " ".join(words + extras)
        created = ts.strftime(_TWITTER_FMT) if i % 3 == 0 else ts.strftime("%Y-%m-%dT%H:%M:%SZ")
        yield {"id": str(1_590_000_000_000_000_000 + i), "text": text, "created_at": created}


def write_jsonl(path, n_docs: int, seed: int = 0, **kwargs) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in generate(n_docs, seed, **kwargs):
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def main(argv: Optional[list[str]] = None) -> int:
    p = argparse.ArgumentParser(prog="wordlayers.synth", description=__doc__.splitlines()[0])
    p.add_argument("--docs", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tokens", type=int, default=15, help="words per document (approx.)")
    p.add_argument("--out", required=True)
    args = p.parse_args(argv)
    write_jsonl(args.out, args.docs, args.seed, tokens_per_doc=args.tokens)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
