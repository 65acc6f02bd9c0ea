"""Capability contract for all model-dependent operations.

Every backend must be deterministic for a fixed ``backend_id``: identical
inputs yield identical outputs across calls, processes and machines.
Blind extraction is only correct under this contract.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

from .text import TokenSeq

MASK = "[MASK]"


class BackendError(Exception):
    """Base class for backend failures."""


class TransportError(BackendError):
    """A remote call failed; the request may be retried."""


class ContractViolation(BackendError):
    """The caller violated an operation precondition."""


class BackendMismatch(BackendError):
    """The remote peer reports a different backend_id than expected."""


class CorruptionError(Exception):
    """Extraction met a state impossible under matching backend/config."""


@dataclass(frozen=True)
class MaskedPrediction:
    word: str
    probability: float


def mask_at(seq: TokenSeq, index: int) -> TokenSeq:
    if not 0 <= index < len(seq):
        raise ContractViolation(f"mask index {index} out of range for {len(seq)} tokens")
    return seq[:index] + (MASK,) + seq[index + 1:]


def replace_at(seq: TokenSeq, index: int, word: str) -> TokenSeq:
    if not 0 <= index < len(seq):
        raise ContractViolation(f"index {index} out of range for {len(seq)} tokens")
    return seq[:index] + (word,) + seq[index + 1:]


class ModelBackend(ABC):
    """Deterministic model capabilities used by the watermarking pipeline."""

    backend_id: str

    @abstractmethod
    def fill_mask_ranked(self, reference: TokenSeq, masked: TokenSeq,
                         mask_index: int, top_k: int) -> list[MaskedPrediction]:
        """Top-k single-piece predictions for the masked position.

        ``reference`` is the unmasked sentence and must influence the
        prediction (it carries the masked word's semantics).  Results are
        sorted by probability descending, ties by code-point order.
        """

    @abstractmethod
    def entailment_probability(self, premise: TokenSeq, hypothesis: TokenSeq) -> float:
        """Probability that ``hypothesis`` is entailed by ``premise``."""

    @abstractmethod
    def sentence_similarity(self, a: TokenSeq, b: TokenSeq) -> float:
        """Cosine similarity of sentence embeddings; symmetric, sim(x,x)=1."""

    @abstractmethod
    def token_probability(self, masked: TokenSeq, mask_index: int, word: str) -> float:
        """Model probability of ``word`` at the masked position (0 if OOV)."""

    @abstractmethod
    def is_single_piece(self, word: str) -> bool:
        """True iff ``word`` is a single vocabulary piece for this backend."""


def check_mask_query(reference: TokenSeq, masked: TokenSeq, mask_index: int) -> None:
    """Validate the fill-mask precondition shared by all backends."""
    if len(reference) != len(masked):
        raise ContractViolation("reference and masked sentence lengths differ")
    if not 0 <= mask_index < len(masked):
        raise ContractViolation(f"mask index {mask_index} out of range")
    if masked[mask_index] != MASK:
        raise ContractViolation("mask placeholder missing at mask_index")
    for i, (r, m) in enumerate(zip(reference, masked)):
        if i != mask_index and r != m:
            raise ContractViolation(f"reference and masked differ at non-mask position {i}")
