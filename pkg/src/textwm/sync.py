"""Synchronicity and substitutability tests.

These two checks are what lets a blind extractor rediscover exactly the
word positions and candidate pairs the embedder used.  A position passes
the synchronicity test when the sorted top-2 candidate pair derived from
the local context is stable under substituting either candidate into the
context; the substitutability test additionally rejects positions whose
substitution would newly qualify the preceding word and so derail the
extractor's left-to-right scan.
"""

from __future__ import annotations

from dataclasses import dataclass

from .backend import ModelBackend, replace_at
from .lexsub import DEFAULT_K, RankedCandidates, lexical_substitution
from .text import RiskConfig, TokenSeq, is_risk_token

DEFAULT_SR_THRESHOLD = 0.95


@dataclass(frozen=True)
class SyncResult:
    """Outcome of the synchronicity test at one position."""

    sync: bool
    candidates: tuple[str, str] | None   # sorted ascending by code point
    target_in_candidates: bool


def final_candidates(rc: RankedCandidates, threshold: float = DEFAULT_SR_THRESHOLD
                     ) -> tuple[str, str] | None:
    """Top-2 ranked words with SR strictly above threshold; None if fewer.

    Never pads with sub-threshold words: a position with fewer than two
    high-relatedness candidates is simply not synchronizable.
    """
    survivors = [w for w, sr in rc.ranked if sr > threshold]
    if len(survivors) < 2:
        return None
    return survivors[0], survivors[1]


def synchronicity_test(i: int, context: TokenSeq, backend: ModelBackend,
                       k: int = DEFAULT_K,
                       threshold: float = DEFAULT_SR_THRESHOLD) -> SyncResult:
    """Synchronicity of position ``i`` within its local context.

    ``context`` must be the local context ``t_1..t_{i+1}`` (0-based: the
    first ``i + 2`` tokens of the working sentence).  The pair is
    synchronous when recomputing the final candidates after substituting
    either candidate yields the same sorted pair.  Whether the target
    word itself belongs to the pair is reported separately; the embedding
    scan requires both facts.
    """
    if not 0 <= i < len(context) - 1:
        raise ValueError(f"target {i} has no next word in context of {len(context)} tokens")

    fc = final_candidates(lexical_substitution(context, i, k, backend), threshold)
    if fc is None:
        return SyncResult(sync=False, candidates=None, target_in_candidates=False)

    pair = tuple(sorted(fc))
    for candidate in fc:
        substituted = replace_at(context, i, candidate)
        fc_sub = final_candidates(lexical_substitution(substituted, i, k, backend), threshold)
        if fc_sub is None or tuple(sorted(fc_sub)) != pair:
            return SyncResult(sync=False, candidates=None, target_in_candidates=False)
    return SyncResult(sync=True, candidates=pair, target_in_candidates=context[i] in fc)


def substitutability_test(i: int, context: TokenSeq, candidates: tuple[str, str],
                          backend: ModelBackend, cfg: RiskConfig,
                          k: int = DEFAULT_K,
                          threshold: float = DEFAULT_SR_THRESHOLD) -> bool:
    """False iff substituting position ``i`` could newly qualify position i-1.

    For each candidate ``c``, position ``i - 1`` is re-tested in the
    context it would see after the substitution, with ``c`` as its next
    word.  If any candidate makes the previous word substitutable, the
    extractor's scan would stop there first, so embedding at ``i`` is
    unsafe.  A previous word in the risk set can never qualify and
    short-circuits to True.
    """
    if i < 1:
        raise ValueError("substitutability test needs a preceding position")
    prev = context[i - 1]
    if is_risk_token(prev, cfg, backend):
        return True
    for candidate in candidates:
        new_context = context[:i] + (candidate,)
        result = synchronicity_test(i - 1, new_context, backend, k, threshold)
        if result.sync and result.target_in_candidates:
            return False
    return True
