"""Run configuration shared by the command-line drivers.

There is no randomness anywhere in the pipeline: two runs with equal
config and inputs produce byte-identical outputs.  Every report echoes
the full config plus the backend id and stopword list version so results
stay auditable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .backend import ModelBackend
from .codec import CodecParams, DEFAULT_F
from .lexsub import DEFAULT_K
from .remote import RemoteBackend
from .stub import StubBackend, StubTable
from .sync import DEFAULT_SR_THRESHOLD
from .text import RiskConfig


@dataclass
class RunConfig:
    backend_spec: str = ""                 # "stub:<table-path>" or "remote:<url>"
    f: int = DEFAULT_F
    k: int = DEFAULT_K
    sr_threshold: float = DEFAULT_SR_THRESHOLD
    stopwords_path: str | None = None
    backend_id: str | None = None          # expected id for remote backends
    cache_dir: str | None = None
    jobs: int = 1
    swords_k: int = 10

    def codec_params(self) -> CodecParams:
        return CodecParams(f=self.f, k=self.k, sr_threshold=self.sr_threshold)

    def risk_config(self) -> RiskConfig:
        return RiskConfig.load(self.stopwords_path)

    def make_backend(self) -> ModelBackend:
        spec = self.backend_spec
        if spec.startswith("stub:"):
            return StubBackend(StubTable.load(spec[len("stub:"):]))
        if spec.startswith("remote:"):
            url = os.environ.get("REMOTE_BACKEND_URL", spec[len("remote:"):])
            return RemoteBackend(url, expected_backend_id=self.backend_id,
                                 cache_dir=self.cache_dir)
        raise ValueError(f"unknown backend spec {spec!r} (use stub:<path> or remote:<url>)")

    def echo(self, backend: ModelBackend, risk: RiskConfig) -> dict:
        return {
            "backend_spec": self.backend_spec,
            "backend_id": backend.backend_id,
            "f": self.f,
            "k": self.k,
            "sr_threshold": self.sr_threshold,
            "stopword_version": risk.version_id,
            "swords_k": self.swords_k,
            "jobs": self.jobs,
        }
