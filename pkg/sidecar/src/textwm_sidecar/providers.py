"""Inference providers.

A provider answers the five capability queries behind the HTTP surface.
`TableProvider` is a deterministic synonym-table implementation used for
protocol tests and offline development; `TransformersProvider` (in
`models.py`) serves the real pretrained models.  Both expose a stable
`backend_id` so clients can pin the exact model identity they were
calibrated against.
"""

from __future__ import annotations

import hashlib
from abc import ABC, abstractmethod

MASK = "[MASK]"


class ModelNotLoaded(RuntimeError):
    """A capability was queried before its model finished loading."""


class Provider(ABC):
    backend_id: str

    @abstractmethod
    def model_info(self) -> dict: ...

    @abstractmethod
    def fill_mask(self, reference: list[str], masked: list[str],
                  mask_index: int, top_k: int) -> list[tuple[str, float]]:
        """Ranked (word, probability) candidates for the masked slot."""

    @abstractmethod
    def entailment(self, premise: list[str], hypothesis: list[str]) -> float: ...

    @abstractmethod
    def similarity(self, a: list[str], b: list[str]) -> float: ...

    @abstractmethod
    def token_probability(self, masked: list[str], mask_index: int,
                          word: str) -> float: ...

    @abstractmethod
    def is_single_piece(self, word: str) -> bool: ...


class TableError(ValueError):
    """Malformed synonym table file."""


class TableProvider(Provider):
    """Synonym-group table provider.

    Table format (UTF-8, tab-separated), one row per group member:

        group_id<TAB>word<TAB>score
        group_id<TAB>word<TAB>score<TAB>next=<word>

    ``next=`` rows define the group used when the token after the masked
    position equals the given word, which makes the table context
    sensitive.  Scoring mirrors a collapsed model: entailment is 1.0 for
    identical sentences, 0.99 for a single same-group substitution, 0.2
    otherwise; similarity is 1 - 0.01 per differing position.
    """

    SAME_GROUP_ENTAILMENT = 0.99
    UNRELATED_ENTAILMENT = 0.2

    def __init__(self, text: str, source: str = "<table>"):
        self.groups: dict[tuple[str, str | None], tuple[tuple[str, float], ...]] = {}
        self.scores: dict[str, float] = {}
        self.source = source
        raw: dict[tuple[str, str | None], list[tuple[str, float]]] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) not in (3, 4):
                raise TableError(f"{source}:{lineno}: expected 3 or 4 fields")
            group_id, word, score_s = parts[:3]
            cond = None
            if len(parts) == 4:
                if not parts[3].startswith("next="):
                    raise TableError(f"{source}:{lineno}: bad condition {parts[3]!r}")
                cond = parts[3][len("next="):]
            try:
                score = float(score_s)
            except ValueError:
                raise TableError(f"{source}:{lineno}: bad score {score_s!r}") from None
            if word in self.scores and self.scores[word] != score:
                raise TableError(f"{source}:{lineno}: conflicting scores for {word!r}")
            self.scores[word] = score
            raw.setdefault((group_id, cond), []).append((word, score))
        for (group_id, cond), members in raw.items():
            ordered = tuple(sorted(members, key=lambda ws: -ws[1]))
            for word, _ in members:
                if (word, cond) in self.groups:
                    raise TableError(
                        f"word {word!r} in more than one group for condition {cond!r}")
                self.groups[(word, cond)] = ordered
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
        self.backend_id = f"table:{digest}"

    @classmethod
    def load(cls, path) -> "TableProvider":
        with open(path, encoding="utf-8") as fh:
            return cls(fh.read(), source=str(path))

    def model_info(self) -> dict:
        return {"kind": "table", "source": self.source,
                "words": len(self.scores)}

    def _group(self, word: str, next_token: str | None):
        if next_token is not None and (word, next_token) in self.groups:
            return self.groups[(word, next_token)]
        return self.groups.get((word, None), ())

    def fill_mask(self, reference, masked, mask_index, top_k):
        word = reference[mask_index]
        nxt = reference[mask_index + 1] if mask_index + 1 < len(reference) else None
        return list(self._group(word, nxt)[:top_k])

    def entailment(self, premise, hypothesis):
        if premise == hypothesis:
            return 1.0
        if len(premise) == len(hypothesis):
            diffs = [(a, b) for a, b in zip(premise, hypothesis) if a != b]
            if len(diffs) == 1 and any(
                    set(diffs[0]) <= {w for w, _ in members}
                    for members in self.groups.values()):
                return self.SAME_GROUP_ENTAILMENT
        return self.UNRELATED_ENTAILMENT

    def similarity(self, a, b):
        diffs = sum(1 for x, y in zip(a, b) if x != y) + abs(len(a) - len(b))
        return max(-1.0, 1.0 - 0.01 * diffs)

    def token_probability(self, masked, mask_index, word):
        return self.scores.get(word, 0.0)

    def is_single_piece(self, word):
        return word in self.scores
