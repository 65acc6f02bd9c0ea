"""Natural-language watermarking by context-aware lexical substitution."""

from .backend import (BackendError, BackendMismatch, ContractViolation,
                      CorruptionError, MaskedPrediction, ModelBackend, MASK,
                      TransportError)
from .codec import (BitSource, CodecParams, DeframeResult, EmbeddingReport,
                    SubstitutionRecord, deframe_message, embed_document,
                    embed_sentence, extract_document, extract_sentence,
                    frame_message, probe_capacity, recover_document)
from .config import RunConfig
from .lexsub import (DEFAULT_K, RankedCandidates, generate_candidates,
                     lexical_substitution, score_relatedness)
from .metrics import (BenchmarkScore, SwordsInstance, ber, load_swords,
                      payload_bpw, recovery_proportion, sr_metric, ss_metric,
                      swords_score)
from .remote import RemoteBackend
from .stub import StubBackend, StubTable, StubTableError
from .sync import (DEFAULT_SR_THRESHOLD, SyncResult, final_candidates,
                   substitutability_test, synchronicity_test)
from .text import (Document, RiskConfig, TokenSeq, detokenize, is_risk_token,
                   parse_document, render_document, split_sentences, tokenize)

__version__ = "0.1.0"
