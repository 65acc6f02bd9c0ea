"""Client tests against an in-process HTTP double speaking the sidecar protocol."""

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from textwm.backend import BackendMismatch, TransportError, mask_at
from textwm.remote import RemoteBackend
from textwm.stub import StubBackend, StubTable

TABLE = "g1\tnight\t0.99\ng1\tevening\t0.98\n"


def _six(x: float) -> str:
    return f"{x:.6f}"


class _Handler(BaseHTTPRequestHandler):
    backend = StubBackend(StubTable.parse(TABLE))
    served_id = None      # override to simulate a mismatching peer
    request_count = {}

    def log_message(self, *args):
        pass

    def _reply(self, obj, status=200):
        body = json.dumps(obj).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self):
        if self.path == "/info":
            self._reply({"backend_id": self.served_id or self.backend.backend_id,
                         "models": {"kind": "table"}})
        elif self.path == "/healthz":
            self._reply({"status": "ok"})
        else:
            self._reply({"error": "not found"}, 404)

    def do_POST(self):
        length = int(self.headers["Content-Length"])
        req = json.loads(self.rfile.read(length))
        self.request_count[self.path] = self.request_count.get(self.path, 0) + 1
        b = self.backend
        bid = self.served_id or b.backend_id
        if self.path == "/fill_mask":
            preds = b.fill_mask_ranked(tuple(req["reference"]), tuple(req["masked"]),
                                       req["mask_index"], req["top_k"])
            self._reply({"backend_id": bid,
                         "predictions": [{"word": p.word,
                                          "probability": _six(p.probability)}
                                         for p in preds]})
        elif self.path == "/nli":
            score = b.entailment_probability(tuple(req["premise"]),
                                             tuple(req["hypothesis"]))
            self._reply({"backend_id": bid, "entailment": _six(score)})
        elif self.path == "/similarity":
            score = b.sentence_similarity(tuple(req["a"]), tuple(req["b"]))
            self._reply({"backend_id": bid, "cosine": _six(score)})
        elif self.path == "/token_prob":
            score = b.token_probability(tuple(req["masked"]), req["mask_index"],
                                        req["word"])
            self._reply({"backend_id": bid, "probability": _six(score)})
        elif self.path == "/single_piece":
            self._reply({"backend_id": bid,
                         "single_piece": b.is_single_piece(req["word"])})
        else:
            self._reply({"error": "not found"}, 404)


@pytest.fixture()
def server():
    _Handler.served_id = None
    _Handler.request_count = {}
    httpd = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{httpd.server_port}"
    httpd.shutdown()


REF = ("We", "met", "at", "night", ".")


def test_remote_matches_local_stub(server):
    remote = RemoteBackend(server)
    local = _Handler.backend
    masked = mask_at(REF, 3)
    assert remote.fill_mask_ranked(REF, masked, 3, 2) == \
        local.fill_mask_ranked(REF, masked, 3, 2)
    assert remote.entailment_probability(REF, REF) == 1.0
    assert remote.sentence_similarity(REF, REF) == 1.0
    assert remote.token_probability(masked, 3, "night") == 0.99
    assert remote.is_single_piece("night")
    assert not remote.is_single_piece("zebra")


def test_remote_pins_backend_id(server):
    remote = RemoteBackend(server)
    assert remote.backend_id == _Handler.backend.backend_id
    with pytest.raises(BackendMismatch):
        RemoteBackend(server, expected_backend_id="other-model")


def test_remote_refuses_mismatched_response(server):
    remote = RemoteBackend(server)
    _Handler.served_id = "drifted"
    with pytest.raises(BackendMismatch):
        remote.entailment_probability(REF, REF)


def test_cache_coherence(server, tmp_path):
    remote = RemoteBackend(server, cache_dir=tmp_path / "cache")
    masked = mask_at(REF, 3)
    live = remote.fill_mask_ranked(REF, masked, 3, 2)
    hits_before = _Handler.request_count.get("/fill_mask", 0)
    cached = remote.fill_mask_ranked(REF, masked, 3, 2)
    assert cached == live
    assert _Handler.request_count.get("/fill_mask", 0) == hits_before


def test_cache_survives_reconnect(server, tmp_path):
    cache = tmp_path / "cache"
    first = RemoteBackend(server, cache_dir=cache)
    score = first.entailment_probability(REF, REF)
    second = RemoteBackend(server, cache_dir=cache)
    before = _Handler.request_count.get("/nli", 0)
    assert second.entailment_probability(REF, REF) == score
    assert _Handler.request_count.get("/nli", 0) == before


def test_transport_error_on_dead_server():
    with pytest.raises(TransportError):
        RemoteBackend("http://127.0.0.1:1")
