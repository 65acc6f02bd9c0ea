"""Context-aware lexical substitution.

Candidates for a target position are generated by masked-word prediction
conditioned on the full unmasked sentence, then re-ranked by the
entailment probability of the substituted sentence against the original
(the semantic-relatedness score, SR).
"""

from __future__ import annotations

from dataclasses import dataclass

from .backend import ModelBackend, mask_at, replace_at
from .stemmer import is_derivation
from .text import TokenSeq

DEFAULT_K = 32


@dataclass(frozen=True)
class RankedCandidates:
    """Candidates for one position: generation order and SR-ranked order."""

    target_index: int
    initial: tuple[tuple[str, float], ...]   # (word, generation probability)
    ranked: tuple[tuple[str, float], ...]    # (word, sr_score), SR descending

    def words(self) -> list[str]:
        return [w for w, _ in self.ranked]


def generate_candidates(s: TokenSeq, i: int, k: int,
                        backend: ModelBackend) -> list[tuple[str, float]]:
    """Top-k masked predictions at position i, minus derivations of the target.

    The target's own surface form may be among the candidates; only
    stemmer-equal, surface-different words are filtered.
    """
    if k < 1:
        return []
    target = s[i]
    masked = mask_at(s, i)
    predictions = backend.fill_mask_ranked(s, masked, i, k)
    return [
        (p.word, p.probability)
        for p in predictions
        if not is_derivation(p.word, target)
    ]


def score_relatedness(s: TokenSeq, i: int, word: str, backend: ModelBackend) -> float:
    """SR score of substituting ``word`` at i: entailment of S-hat given S."""
    substituted = replace_at(s, i, word)
    return backend.entailment_probability(s, substituted)


def lexical_substitution(s: TokenSeq, i: int, k: int,
                         backend: ModelBackend) -> RankedCandidates:
    """Generate candidates at position i and rank them by SR descending.

    Ties in SR are broken by ascending code-point order of the word so
    that ranking is bit-exact on both the embedding and extraction side.
    """
    initial = generate_candidates(s, i, k, backend)
    scored = [(w, score_relatedness(s, i, w, backend)) for w, _ in initial]
    ranked = sorted(scored, key=lambda ws: (-ws[1], ws[0]))
    return RankedCandidates(
        target_index=i,
        initial=tuple(initial),
        ranked=tuple(ranked),
    )
