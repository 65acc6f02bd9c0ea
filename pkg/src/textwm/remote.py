"""HTTP client for the inference sidecar.

Wire protocol (JSON over HTTP, UTF-8):

    GET  /info        -> {"backend_id": str, "models": {...}}
    GET  /healthz     -> {"status": "ok"}
    POST /fill_mask   {"backend_id", "reference": [tok...], "masked": [tok...],
                       "mask_index": int, "top_k": int}
                      -> {"backend_id", "predictions": [{"word", "probability"}]}
    POST /nli         {"backend_id", "premise": [...], "hypothesis": [...]}
                      -> {"backend_id", "entailment"}
    POST /similarity  {"backend_id", "a": [...], "b": [...]}
                      -> {"backend_id", "cosine"}
    POST /token_prob  {"backend_id", "masked": [...], "mask_index", "word"}
                      -> {"backend_id", "probability"}

All probabilities travel as decimal strings with exactly six fractional
digits, so equality comparisons on the client are representation-stable.
The client pins the peer's backend_id at construction and refuses any
response carrying a different id.

Responses are cached on disk keyed by (backend_id, operation,
canonicalized input): the scan re-queries identical local contexts many
times, and the determinism contract makes caching a pure optimization.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import requests

from .backend import (BackendMismatch, MaskedPrediction, ModelBackend,
                      TransportError, check_mask_query)


class ResponseCache:
    """File-per-entry JSON cache with atomic writes."""

    def __init__(self, directory: Path | str):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str):
        path = self._path(key)
        try:
            with open(path, encoding="utf-8") as fh:
                return json.load(fh)
        except (FileNotFoundError, json.JSONDecodeError):
            return None

    def put(self, key: str, value) -> None:
        path = self._path(key)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(value, fh)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


class RemoteBackend(ModelBackend):
    """`ModelBackend` talking to an inference sidecar over HTTP."""

    def __init__(self, base_url: str, expected_backend_id: str | None = None,
                 cache_dir: Path | str | None = None, timeout: float = 60.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        self.session = requests.Session()
        info = self._get("/info")
        self.backend_id = info["backend_id"]
        if expected_backend_id is not None and self.backend_id != expected_backend_id:
            raise BackendMismatch(
                f"sidecar reports backend_id {self.backend_id!r}, "
                f"expected {expected_backend_id!r}")
        self.cache = ResponseCache(cache_dir) if cache_dir is not None else None

    # -- transport ---------------------------------------------------------

    def _get(self, endpoint: str) -> dict:
        try:
            resp = self.session.get(self.base_url + endpoint, timeout=self.timeout)
            resp.raise_for_status()
            return resp.json()
        except requests.RequestException as exc:
            raise TransportError(f"GET {endpoint} failed: {exc}") from exc

    def _post(self, endpoint: str, payload: dict) -> dict:
        cache_key = None
        if self.cache is not None:
            canonical = json.dumps(payload, sort_keys=True, ensure_ascii=False)
            cache_key = hashlib.sha256(
                f"{self.backend_id}|{endpoint}|{canonical}".encode("utf-8")).hexdigest()
            cached = self.cache.get(cache_key)
            if cached is not None:
                return cached
        body = dict(payload, backend_id=self.backend_id)
        try:
            resp = self.session.post(self.base_url + endpoint, json=body,
                                     timeout=self.timeout)
            resp.raise_for_status()
            data = resp.json()
        except requests.RequestException as exc:
            raise TransportError(f"POST {endpoint} failed: {exc}") from exc
        if data.get("backend_id") != self.backend_id:
            raise BackendMismatch(
                f"response backend_id {data.get('backend_id')!r} does not match "
                f"{self.backend_id!r}")
        if cache_key is not None:
            self.cache.put(cache_key, data)
        return data

    # -- capabilities ------------------------------------------------------

    def fill_mask_ranked(self, reference, masked, mask_index, top_k):
        check_mask_query(reference, masked, mask_index)
        data = self._post("/fill_mask", {
            "reference": list(reference), "masked": list(masked),
            "mask_index": mask_index, "top_k": top_k,
        })
        return [MaskedPrediction(p["word"], float(p["probability"]))
                for p in data["predictions"]]

    def entailment_probability(self, premise, hypothesis):
        data = self._post("/nli", {"premise": list(premise),
                                   "hypothesis": list(hypothesis)})
        return float(data["entailment"])

    def sentence_similarity(self, a, b):
        data = self._post("/similarity", {"a": list(a), "b": list(b)})
        return float(data["cosine"])

    def token_probability(self, masked, mask_index, word):
        data = self._post("/token_prob", {"masked": list(masked),
                                          "mask_index": mask_index, "word": word})
        return float(data["probability"])

    def is_single_piece(self, word):
        data = self._post("/single_piece", {"word": word})
        return bool(data["single_piece"])
