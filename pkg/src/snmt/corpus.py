"""Parallel-corpus ingestion and Devanagari-aware text preparation.

Normalization collapses the composed/decomposed Unicode storage variants of
Devanagari (nukta forms in particular) to one canonical sequence, maps
Devanagari digits to ASCII, and squeezes whitespace. Tokenization is
word-level: whitespace split with sentence punctuation detached as
standalone tokens, matching how the alignment plots label their axes.
"""

from __future__ import annotations

import re
import unicodedata
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .special_tokens import (
    END_ID,
    END_TOKEN,
    PAD_ID,
    PAD_TOKEN,
    RESERVED,
    START_ID,
    START_TOKEN,
    UNK_ID,
    UNK_TOKEN,
)

_DEVANAGARI_DIGITS = {0x0966 + i: ord("0") + i for i in range(10)}
_PUNCT = "।॥?!,."
_TOKEN_RE = re.compile(f"[{_PUNCT}]|[^{_PUNCT}\\s]+")


class CorpusFormatError(ValueError):
    pass


def normalize_text(s: str) -> str:
    """Canonical normalization: NFC, ASCII digits, single spaces, stripped."""
    s = unicodedata.normalize("NFC", s)
    s = s.translate(_DEVANAGARI_DIGITS)
    return " ".join(s.split())


def tokenize(s: str) -> list[str]:
    """Split a normalized string into word and punctuation tokens."""
    return _TOKEN_RE.findall(s)


def detokenize(tokens: list[str]) -> str:
    """Inverse of tokenize up to spacing: punctuation attaches leftward."""
    parts: list[str] = []
    for tok in tokens:
        if parts and len(tok) == 1 and tok in _PUNCT:
            parts[-1] += tok
        else:
            parts.append(tok)
    return " ".join(parts)


@dataclass
class SentencePair:
    source: list[str]
    target: list[str]
    line_no: int = 0


@dataclass
class ParallelCorpus:
    pairs: list[SentencePair] = field(default_factory=list)
    malformed: list[tuple[int, str]] = field(default_factory=list)

    @property
    def source_token_count(self) -> int:
        return sum(len(p.source) for p in self.pairs)

    @property
    def target_token_count(self) -> int:
        return sum(len(p.target) for p in self.pairs)


@dataclass
class Vocabulary:
    token_to_id: dict[str, int]
    id_to_token: dict[int, str]
    min_count: int = 1

    @property
    def size(self) -> int:
        return len(self.token_to_id)

    def id_of(self, token: str) -> int:
        return self.token_to_id.get(token, UNK_ID)

    def token_of(self, idx: int) -> str:
        return self.id_to_token[idx]

    def to_dict(self) -> dict:
        return {"min_count": self.min_count, "tokens": dict(self.token_to_id)}

    @classmethod
    def from_dict(cls, d: dict) -> "Vocabulary":
        t2i = {t: int(i) for t, i in d["tokens"].items()}
        return cls(t2i, {i: t for t, i in t2i.items()}, int(d.get("min_count", 1)))


def build_vocab(sentences: list[list[str]], min_count: int = 1) -> Vocabulary:
    """Frequency-ordered vocabulary with the four reserved ids fixed.

    Ties in frequency break lexicographically, so two builds over the same
    corpus always produce identical maps.
    """
    if not sentences:
        raise ValueError("cannot build a vocabulary from an empty corpus")
    counts = Counter(tok for sent in sentences for tok in sent)
    kept = sorted(
        (t for t, c in counts.items() if c >= min_count and t not in RESERVED),
        key=lambda t: (-counts[t], t),
    )
    token_to_id = {PAD_TOKEN: PAD_ID, START_TOKEN: START_ID,
                   END_TOKEN: END_ID, UNK_TOKEN: UNK_ID}
    for i, tok in enumerate(kept, start=len(RESERVED)):
        token_to_id[tok] = i
    return Vocabulary(token_to_id, {i: t for t, i in token_to_id.items()}, min_count)


def encode_sentence(vocab: Vocabulary, tokens: list[str]) -> list[int]:
    """Token ids framed by start/end markers; unknown tokens map to unk."""
    return [START_ID] + [vocab.id_of(t) for t in tokens] + [END_ID]


def decode_ids(vocab: Vocabulary, ids: list[int]) -> list[str]:
    return [vocab.token_of(i) for i in ids]


def load_corpus(path, max_malformed_fraction: float = 0.10) -> ParallelCorpus:
    """Read a tab-separated parallel file, normalizing and tokenizing each side.

    Blank lines are skipped. Lines without exactly one tab, or whose sides
    are empty after normalization, are recorded as malformed and excluded;
    more than `max_malformed_fraction` of them aborts the load.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        raise CorpusFormatError(
            f"{path}: invalid UTF-8 at byte offset {e.start}"
        ) from e

    corpus = ParallelCorpus()
    considered = 0
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        considered += 1
        cols = line.split("\t")
        if len(cols) != 2:
            corpus.malformed.append(
                (line_no, f"expected 1 tab, found {len(cols) - 1}")
            )
            continue
        src = tokenize(normalize_text(cols[0]))
        tgt = tokenize(normalize_text(cols[1]))
        if not src or not tgt:
            corpus.malformed.append((line_no, "empty side after normalization"))
            continue
        corpus.pairs.append(SentencePair(src, tgt, line_no))

    if considered and len(corpus.malformed) / considered > max_malformed_fraction:
        lines = ", ".join(f"line {n} ({why})" for n, why in corpus.malformed)
        raise CorpusFormatError(f"{path}: too many malformed lines: {lines}")
    return corpus


def corpus_stats(corpus: ParallelCorpus) -> tuple[int, int, int]:
    """(samples, source tokens, target tokens), matching the tokenizer."""
    return len(corpus.pairs), corpus.source_token_count, corpus.target_token_count


def split_corpus(corpus: ParallelCorpus, seed: int = 0,
                 fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)):
    """Seeded random train/validation/test split, order-stable within splits."""
    n = len(corpus.pairs)
    idx = np.random.default_rng(seed).permutation(n)
    n_train = int(round(fractions[0] * n))
    n_val = int(round(fractions[1] * n))
    buckets = (
        sorted(idx[:n_train]),
        sorted(idx[n_train:n_train + n_val]),
        sorted(idx[n_train + n_val:]),
    )
    return tuple(
        ParallelCorpus([corpus.pairs[i] for i in b]) for b in buckets
    )
