"""HTTP surface of the sidecar.

Endpoints (JSON over HTTP, UTF-8):

    GET  /info          -> {"backend_id", "models": {...}}
    GET  /healthz       -> {"status": "ok"}
    POST /fill_mask     {"reference", "masked", "mask_index", "top_k"}
                        -> {"backend_id", "predictions": [{"word", "probability"}]}
    POST /nli           {"premise", "hypothesis"} -> {"backend_id", "entailment"}
    POST /similarity    {"a", "b"}                -> {"backend_id", "cosine"}
    POST /token_prob    {"masked", "mask_index", "word"}
                        -> {"backend_id", "probability"}
    POST /single_piece  {"word"}                  -> {"backend_id", "single_piece"}
    POST /batch         {"requests": [{"endpoint", "body"}]}
                        -> {"backend_id", "responses": [...]}

Probabilities are serialized as strings with exactly six fractional
decimal digits (round-half-even), so clients can compare responses
byte-for-byte without float-representation surprises.  Error codes:
400 malformed request, 422 mask-placement violations, 503 model not
loaded yet.
"""

from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .providers import MASK, ModelNotLoaded, Provider

_SIX = Decimal("0.000001")


def six_decimals(x: float) -> str:
    """Fixed six-fractional-digit decimal string, round-half-even."""
    return str(Decimal(str(x)).quantize(_SIX, rounding=ROUND_HALF_EVEN))


class FillMaskRequest(BaseModel):
    reference: list[str]
    masked: list[str]
    mask_index: int
    top_k: int
    backend_id: str | None = None


class NliRequest(BaseModel):
    premise: list[str]
    hypothesis: list[str]
    backend_id: str | None = None


class SimilarityRequest(BaseModel):
    a: list[str]
    b: list[str]
    backend_id: str | None = None


class TokenProbRequest(BaseModel):
    masked: list[str]
    mask_index: int
    word: str
    backend_id: str | None = None


class SinglePieceRequest(BaseModel):
    word: str
    backend_id: str | None = None


class BatchItem(BaseModel):
    endpoint: str
    body: dict


class BatchRequest(BaseModel):
    requests: list[BatchItem]
    backend_id: str | None = None


class MaskPlacementError(ValueError):
    """Mask sentinel missing, duplicated, or at the wrong index."""


def _check_mask(masked: list[str], mask_index: int) -> None:
    if masked.count(MASK) != 1:
        raise MaskPlacementError("input must contain exactly one mask token")
    if not 0 <= mask_index < len(masked) or masked[mask_index] != MASK:
        raise MaskPlacementError(f"mask token is not at index {mask_index}")


def create_app(provider: Provider) -> FastAPI:
    app = FastAPI(title="textwm-sidecar")

    @app.exception_handler(RequestValidationError)
    async def bad_schema(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(MaskPlacementError)
    async def bad_mask(request: Request, exc: MaskPlacementError):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(ModelNotLoaded)
    async def not_loaded(request: Request, exc: ModelNotLoaded):
        return JSONResponse(status_code=503, content={"error": str(exc)})

    @app.get("/info")
    def info():
        return {"backend_id": provider.backend_id, "models": provider.model_info()}

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/fill_mask")
    def fill_mask(req: FillMaskRequest):
        _check_mask(req.masked, req.mask_index)
        if len(req.reference) != len(req.masked):
            raise MaskPlacementError("reference and masked sentence lengths differ")
        preds = provider.fill_mask(req.reference, req.masked,
                                   req.mask_index, req.top_k)
        return {"backend_id": provider.backend_id,
                "predictions": [{"word": w, "probability": six_decimals(p)}
                                for w, p in preds]}

    @app.post("/nli")
    def nli(req: NliRequest):
        score = provider.entailment(req.premise, req.hypothesis)
        return {"backend_id": provider.backend_id,
                "entailment": six_decimals(score)}

    @app.post("/similarity")
    def similarity(req: SimilarityRequest):
        score = provider.similarity(req.a, req.b)
        return {"backend_id": provider.backend_id, "cosine": six_decimals(score)}

    @app.post("/token_prob")
    def token_prob(req: TokenProbRequest):
        _check_mask(req.masked, req.mask_index)
        score = provider.token_probability(req.masked, req.mask_index, req.word)
        return {"backend_id": provider.backend_id,
                "probability": six_decimals(score)}

    @app.post("/single_piece")
    def single_piece(req: SinglePieceRequest):
        return {"backend_id": provider.backend_id,
                "single_piece": provider.is_single_piece(req.word)}

    _HANDLERS = {
        "/fill_mask": (FillMaskRequest, fill_mask),
        "/nli": (NliRequest, nli),
        "/similarity": (SimilarityRequest, similarity),
        "/token_prob": (TokenProbRequest, token_prob),
        "/single_piece": (SinglePieceRequest, single_piece),
    }

    @app.post("/batch")
    def batch(req: BatchRequest):
        responses = []
        for item in req.requests:
            if item.endpoint not in _HANDLERS:
                raise MaskPlacementError(f"unknown batch endpoint {item.endpoint!r}")
            model_cls, handler = _HANDLERS[item.endpoint]
            try:
                parsed = model_cls(**item.body)
            except ValueError as exc:
                raise RequestValidationError([{"batch": str(exc)}]) from exc
            responses.append(handler(parsed))
        return {"backend_id": provider.backend_id, "responses": responses}

    return app
