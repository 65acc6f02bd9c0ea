"""Deterministic table-driven backend.

The stub is the hand-computable oracle for every codec test: all five
capabilities reduce to lookups in a synonym-group table, so expected
embedding and extraction outcomes can be derived on paper.

Table file format (UTF-8, tab-separated):

    group_id<TAB>word<TAB>score
    group_id<TAB>word<TAB>score<TAB>next=<word>

Plain rows define the unconditional group of a word; each word may appear
in at most one unconditional group.  Rows with a ``next=`` condition
define the group used when the token immediately after the masked
position equals the given word.  Conditional groups are what makes the
stub context-sensitive: they let fixtures reproduce the situations where
substituting one word changes a neighbour's candidate set (the reason
the synchronicity and substitutability machinery exists at all).

Scoring rules (fixed):

* ``fill_mask_ranked`` returns the group of the reference word at the
  masked position, ordered by score descending (scores are distinct
  within a group), truncated to ``top_k``.  Unknown word: empty list.
* ``entailment_probability`` is 1.0 for identical sentences; 0.99 when
  they differ at exactly one position and the two words share a group;
  0.2 otherwise.
* ``sentence_similarity`` is 1 - 0.01 * (number of differing positions),
  floored at -1.
* ``token_probability`` is the word's table score (0.0 if absent).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .backend import MaskedPrediction, ModelBackend, check_mask_query
from .text import TokenSeq

SAME_GROUP_ENTAILMENT = 0.99
UNRELATED_ENTAILMENT = 0.2


class StubTableError(ValueError):
    """Malformed or inconsistent stub table file."""


@dataclass(frozen=True)
class StubTable:
    """Synonym groups keyed by (member word, optional next-token condition)."""

    # (word, next_token or None) -> tuple of (word, score) sorted by score desc
    groups: dict[tuple[str, str | None], tuple[tuple[str, float], ...]]
    scores: dict[str, float]
    source_digest: str

    @classmethod
    def parse(cls, text: str, source: str = "<string>") -> "StubTable":
        raw_groups: dict[tuple[str, str | None], list[tuple[str, float]]] = {}
        scores: dict[str, float] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (3, 4):
                raise StubTableError(f"{source}:{lineno}: expected 3 or 4 tab-separated fields")
            group_id, word, score_s = parts[0], parts[1], parts[2]
            cond: str | None = None
            if len(parts) == 4:
                if not parts[3].startswith("next="):
                    raise StubTableError(f"{source}:{lineno}: bad condition {parts[3]!r}")
                cond = parts[3][len("next="):]
            try:
                score = float(score_s)
            except ValueError:
                raise StubTableError(f"{source}:{lineno}: bad score {score_s!r}") from None
            if not 0.0 < score <= 1.0:
                raise StubTableError(f"{source}:{lineno}: score must be in (0, 1]")
            if word in scores and scores[word] != score:
                raise StubTableError(f"{source}:{lineno}: conflicting scores for {word!r}")
            scores[word] = score
            raw_groups.setdefault((group_id, cond), []).append((word, score))

        by_key: dict[tuple[str, str | None], tuple[tuple[str, float], ...]] = {}
        for (group_id, cond), members in raw_groups.items():
            seen_scores = [s for _, s in members]
            if len(set(seen_scores)) != len(seen_scores):
                raise StubTableError(f"group {group_id!r}: scores within a group must be distinct")
            ordered = tuple(sorted(members, key=lambda ws: -ws[1]))
            for word, _ in members:
                key = (word, cond)
                if key in by_key:
                    raise StubTableError(
                        f"word {word!r} appears in more than one group for condition {cond!r}")
                by_key[key] = ordered
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
        return cls(groups=by_key, scores=scores, source_digest=digest)

    @classmethod
    def load(cls, path) -> "StubTable":
        with open(path, encoding="utf-8") as fh:
            return cls.parse(fh.read(), source=str(path))

    def group_for(self, word: str, next_token: str | None) -> tuple[tuple[str, float], ...]:
        """Group of ``word`` given the token after the mask; () if unknown."""
        if next_token is not None and (word, next_token) in self.groups:
            return self.groups[(word, next_token)]
        return self.groups.get((word, None), ())

    def share_group(self, a: str, b: str) -> bool:
        return any(
            {a, b} <= {w for w, _ in members}
            for members in self.groups.values()
        )


class StubBackend(ModelBackend):
    """Table-driven `ModelBackend`; every answer is computable by hand."""

    def __init__(self, table: StubTable):
        self.table = table
        self.backend_id = f"stub:{table.source_digest}"

    def fill_mask_ranked(self, reference, masked, mask_index, top_k):
        check_mask_query(reference, masked, mask_index)
        if top_k < 1:
            return []
        word = reference[mask_index]
        nxt = reference[mask_index + 1] if mask_index + 1 < len(reference) else None
        group = self.table.group_for(word, nxt)
        return [MaskedPrediction(w, s) for w, s in group[:top_k]]

    def entailment_probability(self, premise, hypothesis):
        if premise == hypothesis:
            return 1.0
        if len(premise) == len(hypothesis):
            diffs = [(a, b) for a, b in zip(premise, hypothesis) if a != b]
            if len(diffs) == 1 and self.table.share_group(*diffs[0]):
                return SAME_GROUP_ENTAILMENT
        return UNRELATED_ENTAILMENT

    def sentence_similarity(self, a: TokenSeq, b: TokenSeq) -> float:
        diffs = sum(1 for x, y in zip(a, b) if x != y) + abs(len(a) - len(b))
        return max(-1.0, 1.0 - 0.01 * diffs)

    def token_probability(self, masked, mask_index, word):
        check_mask_query(masked, masked, mask_index)
        return self.table.scores.get(word, 0.0)

    def is_single_piece(self, word: str) -> bool:
        return word in self.table.scores
