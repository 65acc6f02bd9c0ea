"""Watermark-quality metrics and the word-substitution benchmark scorer.

Semantic relatedness (SR) is the entailment probability of the
watermarked sentence given the original; semantic similarity (SS) is the
cosine similarity of their sentence embeddings.  Payload is bits per
word, BER is the fraction of differing bits, and recovery proportion is
measured over changed positions only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from statistics import fmean

from .backend import ModelBackend
from .codec import EmbeddingReport, SubstitutionRecord
from .text import Document, TokenSeq, tokenize


def sr_metric(original: TokenSeq, watermarked: TokenSeq, backend: ModelBackend) -> float:
    """Entailment probability with the original sentence as premise."""
    if len(original) != len(watermarked):
        raise ValueError("sentences must have the same token count")
    return backend.entailment_probability(original, watermarked)


def ss_metric(original: TokenSeq, watermarked: TokenSeq, backend: ModelBackend) -> float:
    return backend.sentence_similarity(original, watermarked)


def payload_bpw(report: EmbeddingReport, total_words: int | None = None) -> float:
    words = report.total_words if total_words is None else total_words
    if words <= 0:
        raise ValueError("total word count must be positive")
    return report.bits_embedded / words


def ber(sent: list[int], received: list[int]) -> float:
    """Bit error rate; a length mismatch signals a framing failure upstream."""
    if len(sent) != len(received):
        raise ValueError(f"bit stream lengths differ: {len(sent)} vs {len(received)}")
    if not sent:
        return 0.0
    return sum(1 for a, b in zip(sent, received) if a != b) / len(sent)


def recovery_proportion(recovered: Document, original: Document,
                        report: list[SubstitutionRecord]) -> float:
    """Fraction of *changed* positions whose original word was restored."""
    changed = [r for r in report if r.chosen != r.original]
    if not changed:
        return 1.0
    hits = sum(
        1 for r in changed
        if recovered.sentences[r.sentence_idx][r.position]
        == original.sentences[r.sentence_idx][r.position]
    )
    return hits / len(changed)


# --- word-substitution benchmark (precision/recall at k) ------------------


class BenchmarkFormatError(ValueError):
    """Malformed benchmark file; message carries the offending line number."""


@dataclass(frozen=True)
class SwordsInstance:
    """One benchmark item: a context, a target position and human judgments."""

    context: TokenSeq
    target_index: int
    acceptable: frozenset[str]
    conceivable: frozenset[str]

    @property
    def target(self) -> str:
        return self.context[self.target_index]


def load_swords(path) -> list[SwordsInstance]:
    """Load benchmark instances from a JSON-lines file.

    Schema per line: {"context": str, "target_offset": int,
    "acceptable": [...], "conceivable": [...]} where target_offset is the
    0-based token index in the tokenized context and acceptable must be a
    subset of conceivable.
    """
    instances = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise BenchmarkFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            try:
                context = tokenize(obj["context"])
                target_index = int(obj["target_offset"])
                acceptable = frozenset(obj["acceptable"])
                conceivable = frozenset(obj["conceivable"])
            except (KeyError, TypeError, ValueError) as exc:
                raise BenchmarkFormatError(f"{path}:{lineno}: bad record: {exc}") from None
            if not 0 <= target_index < len(context):
                raise BenchmarkFormatError(f"{path}:{lineno}: target_offset out of range")
            if not acceptable <= conceivable:
                raise BenchmarkFormatError(
                    f"{path}:{lineno}: acceptable list is not a subset of conceivable")
            target = context[target_index]
            if target in acceptable or target in conceivable:
                raise BenchmarkFormatError(
                    f"{path}:{lineno}: target word must not appear in the judgment lists")
            instances.append(SwordsInstance(context, target_index, acceptable, conceivable))
    return instances


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float


def _prf(top: list[str], gold: frozenset[str], k: int) -> PRF | None:
    if not top:
        return None
    hits = sum(1 for w in top if w in gold)
    precision = hits / len(top)
    recall = hits / min(k, len(gold)) if gold else 0.0
    f1 = (2 * precision * recall / (precision + recall)) if precision + recall else 0.0
    return PRF(precision, recall, f1)


@dataclass(frozen=True)
class BenchmarkScore:
    """Macro-averaged P/R/F at k for the acceptable and conceivable lists."""

    acceptable: PRF
    conceivable: PRF
    instances: int
    excluded: int   # instances with an empty top-k, left out of the means


def swords_score(system_outputs: list[list[str]], instances: list[SwordsInstance],
                 k: int = 10, mode: str = "lenient") -> BenchmarkScore:
    """Score ranked substitute lists against human judgments.

    ``lenient`` drops system words absent from the conceivable list
    before truncating to the top k; ``strict`` scores the raw top k.
    Instances whose top-k ends up empty have undefined precision and are
    excluded from the means (never zero-filled); their count is reported.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if mode not in ("lenient", "strict"):
        raise ValueError(f"unknown mode {mode!r}")
    if len(system_outputs) != len(instances):
        raise ValueError("one output list per instance required")

    acc_scores, con_scores = [], []
    excluded = 0
    for outputs, inst in zip(system_outputs, instances):
        candidates = outputs
        if mode == "lenient":
            candidates = [w for w in outputs if w in inst.conceivable]
        top = candidates[:k]
        acc = _prf(top, inst.acceptable, k)
        con = _prf(top, inst.conceivable, k)
        if acc is None or con is None:
            excluded += 1
            continue
        acc_scores.append(acc)
        con_scores.append(con)

    def aggregate(scores: list[PRF]) -> PRF:
        if not scores:
            return PRF(0.0, 0.0, 0.0)
        return PRF(fmean(s.precision for s in scores),
                   fmean(s.recall for s in scores),
                   fmean(s.f1 for s in scores))

    return BenchmarkScore(acceptable=aggregate(acc_scores),
                          conceivable=aggregate(con_scores),
                          instances=len(instances), excluded=excluded)
