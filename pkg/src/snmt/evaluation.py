"""Automatic and manual translation quality metrics.

BLEU follows the classic corpus-level recipe: modified n-gram precisions
with reference-clipped counts, a uniform geometric mean over n = 1..4, and
a brevity penalty for short candidates; scores live in [0, 1]. Human
evaluation aggregates 4-point adequacy scores into an accuracy fraction.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass


@dataclass
class BleuReport:
    precisions: list[float]         # p_1 .. p_max_n
    match_counts: list[tuple[int, int]]  # (clipped matches, total) per n
    brevity_penalty: float
    candidate_length: int
    reference_length: int
    score: float


@dataclass
class HumanEvalRecord:
    sentence_id: str
    score: int
    annotator: str | None = None

    def __post_init__(self):
        if self.score not in (1, 2, 3, 4):
            raise ValueError(f"score {self.score} outside the 4-point scale")


def _ngrams(tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def modified_precision(candidates, references, n: int) -> tuple[int, int]:
    """Corpus-wide clipped n-gram matches and total candidate n-grams.

    Each candidate is paired with one reference; candidate n-gram counts
    are clipped at the reference's count before summing.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if len(candidates) != len(references):
        raise ValueError(
            f"{len(candidates)} candidates vs {len(references)} references"
        )
    matches = 0
    total = 0
    for cand, ref in zip(candidates, references):
        cand_counts = _ngrams(cand, n)
        ref_counts = _ngrams(ref, n)
        total += sum(cand_counts.values())
        matches += sum(min(c, ref_counts[g]) for g, c in cand_counts.items())
    return matches, total


def brevity_penalty(c: int, r: int) -> float:
    if r < 1 or c < 0:
        raise ValueError("need candidate length >= 0 and reference length >= 1")
    if c == 0:
        return 0.0
    if c >= r:
        return 1.0
    return math.exp(1.0 - r / c)


def corpus_bleu(candidates, references, max_n: int = 4,
                smooth: bool = False) -> BleuReport:
    """Corpus-level BLEU with one reference per candidate, unsmoothed.

    With `smooth`, add-one smoothing is applied to p_n for n >= 2
    (sentence-level reporting); the default matches the corpus metric.
    """
    if not candidates:
        raise ValueError("need at least one candidate/reference pair")
    if len(candidates) != len(references):
        raise ValueError(
            f"{len(candidates)} candidates vs {len(references)} references"
        )
    counts = [modified_precision(candidates, references, n) for n in range(1, max_n + 1)]
    precisions = []
    for n, (matches, total) in enumerate(counts, start=1):
        if smooth and n >= 2:
            precisions.append((matches + 1) / (total + 1) if total + 1 else 0.0)
        else:
            precisions.append(matches / total if total else 0.0)

    c = sum(len(x) for x in candidates)
    r = sum(len(x) for x in references)
    bp = brevity_penalty(c, max(r, 1))
    # Orders with no candidate n-grams at all (every sentence shorter than n)
    # carry no evidence and drop out of the geometric mean; a zero precision
    # with n-grams present zeroes the score (no smoothing by default).
    informative = [p for p, (_, total) in zip(precisions, counts) if total > 0]
    if informative and all(p > 0 for p in informative):
        score = bp * math.exp(sum(math.log(p) for p in informative) / len(informative))
    else:
        score = 0.0
    return BleuReport(
        precisions=precisions,
        match_counts=counts,
        brevity_penalty=bp,
        candidate_length=c,
        reference_length=r,
        score=score,
    )


def sentence_bleu(candidate, reference, max_n: int = 4) -> float:
    """Smoothed single-sentence BLEU for per-sentence reporting."""
    return corpus_bleu([candidate], [reference], max_n=max_n, smooth=True).score


def human_eval_accuracy(records, threshold: int = 3) -> tuple[float, dict[int, int]]:
    """Fraction of records at or above `threshold`, plus a score histogram."""
    records = list(records)
    if not records:
        raise ValueError("no human evaluation records")
    if threshold not in (2, 3, 4):
        raise ValueError("threshold must be 2, 3, or 4")
    histogram = {s: 0 for s in (1, 2, 3, 4)}
    for rec in records:
        histogram[rec.score] += 1
    acceptable = sum(1 for rec in records if rec.score >= threshold)
    return acceptable / len(records), histogram


def load_human_eval_records(path) -> list[HumanEvalRecord]:
    """Parse `sentence_id<TAB>score[<TAB>annotator]` lines."""
    records = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            cols = line.rstrip("\n").split("\t")
            if len(cols) not in (2, 3):
                raise ValueError(f"{path}: malformed record on line {line_no}")
            records.append(
                HumanEvalRecord(cols[0], int(cols[1]), cols[2] if len(cols) == 3 else None)
            )
    return records
