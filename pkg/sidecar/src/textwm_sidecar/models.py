"""Pretrained-model provider.

Serves three pinned models: a masked LM for candidate generation, an NLI
cross-encoder for entailment scoring, and a sentence-embedding model for
cosine similarity.  Everything runs in eval mode with gradients disabled
so repeated identical requests return identical numbers.

Models load lazily on first use; until then capability queries raise
`ModelNotLoaded` (surfaced as HTTP 503), which keeps `/info` and
`/healthz` responsive during warm-up.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .providers import MASK, ModelNotLoaded, Provider

DEFAULT_MLM = "bert-base-cased"
DEFAULT_NLI = "roberta-large-mnli"
DEFAULT_STS = "sentence-transformers/stsb-roberta-base-v2"


@dataclass
class SidecarConfig:
    mlm_model_id: str = DEFAULT_MLM
    nli_model_id: str = DEFAULT_NLI
    sts_model_id: str = DEFAULT_STS
    host: str = "127.0.0.1"
    port: int = 8321
    extra_versions: dict = field(default_factory=dict)

    def backend_id(self) -> str:
        try:
            import transformers
            lib = transformers.__version__
        except ImportError:
            lib = "unavailable"
        material = "|".join([self.mlm_model_id, self.nli_model_id,
                             self.sts_model_id, lib,
                             *(f"{k}={v}" for k, v in sorted(self.extra_versions.items()))])
        return "hf:" + hashlib.sha256(material.encode("utf-8")).hexdigest()[:16]


class TransformersProvider(Provider):
    """Provider backed by pretrained transformer models (CPU)."""

    def __init__(self, config: SidecarConfig | None = None):
        self.config = config or SidecarConfig()
        self.backend_id = self.config.backend_id()
        self._mlm = self._nli = self._sts = None

    def model_info(self) -> dict:
        return {"kind": "transformers",
                "mlm": self.config.mlm_model_id,
                "nli": self.config.nli_model_id,
                "sts": self.config.sts_model_id}

    # -- lazy loading ------------------------------------------------------

    def _load_mlm(self):
        if self._mlm is None:
            try:
                import torch
                from transformers import AutoModelForMaskedLM, AutoTokenizer
                tok = AutoTokenizer.from_pretrained(self.config.mlm_model_id)
                model = AutoModelForMaskedLM.from_pretrained(self.config.mlm_model_id)
                model.eval()
                self._mlm = (torch, tok, model)
            except Exception as exc:
                raise ModelNotLoaded(f"masked LM unavailable: {exc}") from exc
        return self._mlm

    def _load_nli(self):
        if self._nli is None:
            try:
                import torch
                from transformers import (AutoModelForSequenceClassification,
                                          AutoTokenizer)
                tok = AutoTokenizer.from_pretrained(self.config.nli_model_id)
                model = AutoModelForSequenceClassification.from_pretrained(
                    self.config.nli_model_id)
                model.eval()
                labels = {name.lower(): idx
                          for name, idx in model.config.label2id.items()}
                self._nli = (torch, tok, model, labels["entailment"])
            except Exception as exc:
                raise ModelNotLoaded(f"NLI model unavailable: {exc}") from exc
        return self._nli

    def _load_sts(self):
        if self._sts is None:
            try:
                from sentence_transformers import SentenceTransformer
                self._sts = SentenceTransformer(self.config.sts_model_id)
            except Exception as exc:
                raise ModelNotLoaded(f"embedding model unavailable: {exc}") from exc
        return self._sts

    # -- capabilities ------------------------------------------------------

    def _mask_logits(self, reference: list[str] | None, masked: list[str]):
        """Logits at the mask slot.

        With a reference sentence the model sees the segment pair
        `reference [SEP] masked`, conditioning predictions on the intact
        original; without one (recovery has no original) the masked
        sentence is scored alone.
        """
        torch, tok, model = self._load_mlm()
        text_b = " ".join(w if w != MASK else tok.mask_token for w in masked)
        if reference is not None:
            enc = tok(" ".join(reference), text_b, return_tensors="pt")
        else:
            enc = tok(text_b, return_tensors="pt")
        mask_positions = (enc["input_ids"][0] == tok.mask_token_id).nonzero()
        if len(mask_positions) != 1:
            raise ValueError("input must contain exactly one mask")
        with torch.no_grad():
            logits = model(**enc).logits[0, mask_positions[0, 0]]
        return torch, tok, logits

    def fill_mask(self, reference, masked, mask_index, top_k):
        torch, tok, logits = self._mask_logits(reference, masked)
        probs = torch.softmax(logits, dim=-1)
        ranked = torch.argsort(probs, descending=True)
        out: list[tuple[str, float]] = []
        for token_id in ranked.tolist():
            word = tok.convert_ids_to_tokens(token_id)
            # Whole words only: skip continuation pieces and specials.
            if word.startswith("##") or word in tok.all_special_tokens:
                continue
            out.append((word, float(probs[token_id])))
            if len(out) >= top_k:
                break
        return out

    def entailment(self, premise, hypothesis):
        torch, tok, model, ent_idx = self._load_nli()
        enc = tok(" ".join(premise), " ".join(hypothesis), return_tensors="pt")
        with torch.no_grad():
            probs = torch.softmax(model(**enc).logits[0], dim=-1)
        return float(probs[ent_idx])

    def similarity(self, a, b):
        model = self._load_sts()
        import torch
        emb = model.encode([" ".join(a), " ".join(b)], convert_to_tensor=True)
        cos = torch.nn.functional.cosine_similarity(emb[0:1], emb[1:2])
        return float(cos[0])

    def token_probability(self, masked, mask_index, word):
        torch, tok, logits = self._mask_logits(None, masked)
        ids = tok.convert_tokens_to_ids([word])
        if ids[0] == tok.unk_token_id:
            return 0.0
        probs = torch.softmax(logits, dim=-1)
        return float(probs[ids[0]])

    def is_single_piece(self, word):
        _, tok, _ = self._load_mlm()
        return len(tok.tokenize(word)) == 1
