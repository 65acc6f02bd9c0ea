"""Inference sidecar: serves the model capabilities behind the watermark
codec (masked-word prediction, entailment, sentence similarity, token
probability, vocabulary membership) as a small JSON/HTTP service."""

from .app import create_app
from .providers import ModelNotLoaded, Provider, TableProvider

__all__ = ["create_app", "Provider", "TableProvider", "ModelNotLoaded"]

__version__ = "0.1.0"
