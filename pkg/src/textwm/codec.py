"""Sequence incremental watermark embedding, blind extraction and recovery.

The embedder scans each sentence left to right, starting at the second
token and stopping before the last one.  Risk tokens are skipped.  At
every other position the synchronicity test runs on the local context
(all tokens up to and including the next word); if the target word
belongs to the synchronized pair and the substitutability test allows
it, one bit is consumed and the position is rewritten with the first
pair member for 0, the second for 1 (pair sorted ascending by code
point).  After an embedding, the scan jumps forward by the spacing
parameter ``f`` plus one, and the substitutability test is skipped at
exactly that distance (the previous position is the protected next-word
of the prior embedding).

Extraction replays the identical scan over the watermarked sentence and
reads the bit off which pair member occupies each located position, so
no original text is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .backend import CorruptionError, ModelBackend, mask_at, replace_at
from .lexsub import DEFAULT_K
from .sync import DEFAULT_SR_THRESHOLD, substitutability_test, synchronicity_test
from .text import Document, RiskConfig, TokenSeq, is_risk_token

DEFAULT_F = 1
_LENGTH_BITS = 16


class BitSource:
    """Pull-based bit supply; returns None when exhausted."""

    def __init__(self, bits: Iterable[int]):
        self._it: Iterator[int] = iter(bits)
        self.consumed = 0

    def next_bit(self) -> int | None:
        try:
            bit = next(self._it)
        except StopIteration:
            return None
        if bit not in (0, 1):
            raise ValueError(f"bit source yielded {bit!r}")
        self.consumed += 1
        return bit

    @classmethod
    def zeros(cls) -> "BitSource":
        """Infinite zero source, used for capacity probing."""
        return cls(itertools.repeat(0))

    @classmethod
    def cycle(cls, bits: list[int]) -> "BitSource":
        return cls(itertools.cycle(bits)) if bits else cls(())


@dataclass(frozen=True)
class SubstitutionRecord:
    """One located carrier position, on either side of the channel."""

    sentence_idx: int
    position: int          # 0-based token index within the sentence
    original: str          # embedding side: pre-substitution word
    chosen: str            # word present after embedding / word found at extraction
    c1: str
    c2: str
    bit: int

    def to_json_dict(self) -> dict:
        return {
            "sentence_idx": self.sentence_idx,
            "position": self.position,
            "original": self.original,
            "chosen": self.chosen,
            "c1": self.c1,
            "c2": self.c2,
            "bit": self.bit,
        }


@dataclass
class EmbeddingReport:
    records: list[SubstitutionRecord] = field(default_factory=list)
    total_words: int = 0

    @property
    def bits_embedded(self) -> int:
        return len(self.records)

    def bits(self) -> list[int]:
        return [r.bit for r in self.records]


@dataclass(frozen=True)
class CodecParams:
    f: int = DEFAULT_F
    k: int = DEFAULT_K
    sr_threshold: float = DEFAULT_SR_THRESHOLD
    substitutability: bool = True   # disable only for ablation experiments


def _scan_sentence(tokens: list[str], backend: ModelBackend, cfg: RiskConfig,
                   params: CodecParams, on_carrier) -> None:
    """Shared scan loop; ``on_carrier(j, pair)`` returns the word to place
    at position j, or None to stop the scan (bit supply exhausted)."""
    n = len(tokens)
    f = params.f
    latest_embed = -1   # 0-based; "no embedding yet"
    j = 1
    while j < n - 1:
        word = tokens[j]
        if is_risk_token(word, cfg, backend):
            j += 1
            continue
        context = tuple(tokens[: j + 2])
        result = synchronicity_test(j, context, backend, params.k, params.sr_threshold)
        if result.sync and result.target_in_candidates:
            ok = True
            if params.substitutability and (j - latest_embed) != f + 1:
                ok = substitutability_test(j, context, result.candidates,
                                           backend, cfg, params.k, params.sr_threshold)
            if ok:
                placed = on_carrier(j, result.candidates)
                if placed is None:
                    return
                tokens[j] = placed
                latest_embed = j
                j += f + 1
                continue
        j += 1


def embed_sentence(sentence: TokenSeq, bits: BitSource, backend: ModelBackend,
                   cfg: RiskConfig, params: CodecParams = CodecParams(),
                   sentence_idx: int = 0) -> tuple[TokenSeq, list[SubstitutionRecord]]:
    """Embed bits into one sentence; token count is always preserved."""
    working = list(sentence)
    records: list[SubstitutionRecord] = []

    def on_carrier(j: int, pair: tuple[str, str]) -> str | None:
        bit = bits.next_bit()
        if bit is None:
            return None
        chosen = pair[bit]
        records.append(SubstitutionRecord(
            sentence_idx=sentence_idx, position=j, original=working[j],
            chosen=chosen, c1=pair[0], c2=pair[1], bit=bit))
        return chosen

    _scan_sentence(working, backend, cfg, params, on_carrier)
    return tuple(working), records


def embed_document(doc: Document, bits: BitSource, backend: ModelBackend,
                   cfg: RiskConfig, params: CodecParams = CodecParams()
                   ) -> tuple[Document, EmbeddingReport]:
    """Embed a bit stream across a document; bits are consumed globally
    across sentences in order."""
    report = EmbeddingReport(total_words=doc.total_words)
    out_sentences = []
    for idx, sentence in enumerate(doc.sentences):
        new_sentence, records = embed_sentence(sentence, bits, backend, cfg, params, idx)
        out_sentences.append(new_sentence)
        report.records.extend(records)
    out_doc = Document(sentences=tuple(out_sentences),
                       source_text="")
    return out_doc, report


def probe_capacity(doc: Document, backend: ModelBackend, cfg: RiskConfig,
                   params: CodecParams = CodecParams()) -> int:
    """Number of bits the document can carry, without committing a message."""
    _, report = embed_document(doc, BitSource.zeros(), backend, cfg, params)
    return report.bits_embedded


def extract_sentence(sentence: TokenSeq, backend: ModelBackend, cfg: RiskConfig,
                     params: CodecParams = CodecParams(),
                     sentence_idx: int = 0) -> list[SubstitutionRecord]:
    """Locate carrier positions in a watermarked sentence and read their bits."""
    working = list(sentence)
    records: list[SubstitutionRecord] = []

    def on_carrier(j: int, pair: tuple[str, str]) -> str:
        word = working[j]
        if word not in pair:
            # Unreachable when backend/config match the embedder; a hit
            # signals tampering or a backend mismatch.
            raise CorruptionError(
                f"located word {word!r} not in candidate pair {pair} "
                f"(sentence {sentence_idx}, position {j})")
        bit = 0 if word == pair[0] else 1
        records.append(SubstitutionRecord(
            sentence_idx=sentence_idx, position=j, original=word,
            chosen=word, c1=pair[0], c2=pair[1], bit=bit))
        return word

    _scan_sentence(working, backend, cfg, params, on_carrier)
    return records


def extract_document(doc: Document, backend: ModelBackend, cfg: RiskConfig,
                     params: CodecParams = CodecParams()
                     ) -> tuple[list[int], list[SubstitutionRecord]]:
    records: list[SubstitutionRecord] = []
    for idx, sentence in enumerate(doc.sentences):
        records.extend(extract_sentence(sentence, backend, cfg, params, idx))
    return [r.bit for r in records], records


@dataclass(frozen=True)
class RecoveryRecord:
    sentence_idx: int
    position: int
    watermarked: str
    recovered: str


def recover_document(doc: Document, located: list[SubstitutionRecord],
                     backend: ModelBackend, cfg: RiskConfig
                     ) -> tuple[Document, list[RecoveryRecord]]:
    """Best-effort reconstruction of the original document.

    For each located pair, both candidates are scored by masked token
    probability in the watermarked sentence (the original is not
    available to a blind extractor) and the higher-probability word wins;
    ties fall back to code-point order.
    """
    sentences = [list(s) for s in doc.sentences]
    records: list[RecoveryRecord] = []
    for rec in located:
        sentence = doc.sentences[rec.sentence_idx]
        masked = mask_at(sentence, rec.position)
        p1 = backend.token_probability(masked, rec.position, rec.c1)
        p2 = backend.token_probability(masked, rec.position, rec.c2)
        winner = rec.c1 if p1 >= p2 else rec.c2
        sentences[rec.sentence_idx][rec.position] = winner
        records.append(RecoveryRecord(
            sentence_idx=rec.sentence_idx, position=rec.position,
            watermarked=rec.chosen, recovered=winner))
    out = Document(sentences=tuple(tuple(s) for s in sentences), source_text="")
    return out, records


# --- message framing ------------------------------------------------------
#
# Frame layout: 16-bit big-endian payload length in bytes, then the
# payload bits MSB-first.  The whole frame repeats cyclically to fill the
# channel capacity; the decoder majority-votes each frame position across
# all (possibly partial) repetitions.


@dataclass(frozen=True)
class DeframeResult:
    payload: bytes
    complete: bool
    repetitions: int


def bytes_to_bits(data: bytes) -> list[int]:
    return [(byte >> (7 - i)) & 1 for byte in data for i in range(8)]


def bits_to_bytes(bits: list[int]) -> bytes:
    out = bytearray()
    for i in range(0, len(bits) - 7, 8):
        byte = 0
        for bit in bits[i:i + 8]:
            byte = (byte << 1) | bit
        out.append(byte)
    return bytes(out)


def frame_message(payload: bytes) -> list[int]:
    if len(payload) >= 1 << _LENGTH_BITS:
        raise ValueError("payload too long for 16-bit length prefix")
    length_bits = [(len(payload) >> (_LENGTH_BITS - 1 - i)) & 1
                   for i in range(_LENGTH_BITS)]
    return length_bits + bytes_to_bits(payload)


def deframe_message(bits: list[int]) -> DeframeResult:
    if len(bits) < _LENGTH_BITS:
        return DeframeResult(payload=b"", complete=False, repetitions=0)
    length = 0
    for bit in bits[:_LENGTH_BITS]:
        length = (length << 1) | bit
    frame_len = _LENGTH_BITS + 8 * length
    if len(bits) < frame_len:
        partial = bits_to_bytes(bits[_LENGTH_BITS:])
        return DeframeResult(payload=partial, complete=False, repetitions=0)
    voted = []
    for pos in range(frame_len):
        occurrences = bits[pos::frame_len] if frame_len else []
        ones = sum(occurrences)
        zeros = len(occurrences) - ones
        if ones == zeros:
            voted.append(bits[pos])   # tie: trust the first repetition
        else:
            voted.append(1 if ones > zeros else 0)
    payload = bits_to_bytes(voted[_LENGTH_BITS:])
    return DeframeResult(payload=payload, complete=True,
                         repetitions=len(bits) // frame_len)
