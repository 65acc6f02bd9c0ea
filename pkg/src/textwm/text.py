"""Document model, sentence splitting, tokenization and risk classification.

A sentence is an ordered tuple of surface tokens.  All positions in this
package are 0-based; the watermarking literature's ``t_i`` corresponds to
``tokens[i - 1]``.

Both the embedding and the extraction side must tokenize identically, so
the rules here are deliberately small and fully deterministic:

* words are maximal runs of alphanumerics, optionally joined by internal
  apostrophes or hyphens;
* a word followed by a period is kept as one token when the word is on the
  shipped abbreviation list (``Mr.`` stays a single token);
* every other non-space character is its own token;
* detokenization joins tokens with single spaces;
* sentence boundaries occur after ``.``, ``!`` or ``?`` tokens when the
  next token starts with an uppercase letter or an opening quote.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

TokenSeq = tuple[str, ...]

_WORD_RE = re.compile(r"[^\W_]+(?:['’\-][^\W_]+)*", re.UNICODE)
_TERMINALS = {".", "!", "?"}
_OPENERS = {'"', "'", "‘", "“", "`"}


def _load_word_file(name: str) -> tuple[str, frozenset[str]]:
    """Read a one-word-per-line data file, returning (version_id, words)."""
    text = resources.files("textwm.data").joinpath(name).read_text("utf-8")
    return _parse_word_list(text)


def _parse_word_list(text: str) -> tuple[str, frozenset[str]]:
    lines = text.splitlines()
    version = ""
    words = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#version:"):
            version = line[len("#version:"):]
        elif not line.startswith("#"):
            words.append(line.lower())
    return version, frozenset(words)


_ABBREV_VERSION, ABBREVIATIONS = _load_word_file("abbreviations.txt")


@dataclass(frozen=True)
class RiskConfig:
    """Pinned token classes that must never carry watermark bits."""

    stopwords: frozenset[str]
    version_id: str

    @classmethod
    def load(cls, path=None) -> "RiskConfig":
        """Load a stopword file (``#version:<id>`` header, one word per line)."""
        if path is None:
            text = resources.files("textwm.data").joinpath("stopwords.txt").read_text("utf-8")
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        version, words = _parse_word_list(text)
        return cls(stopwords=words, version_id=version)


@dataclass(frozen=True)
class Document:
    sentences: tuple[TokenSeq, ...]
    source_text: str

    @property
    def total_words(self) -> int:
        return sum(len(s) for s in self.sentences)


def tokenize(raw: str) -> TokenSeq:
    """Tokenize raw text into a flat sequence of surface tokens."""
    tokens = []
    pos = 0
    n = len(raw)
    while pos < n:
        ch = raw[pos]
        if ch.isspace():
            pos += 1
            continue
        m = _WORD_RE.match(raw, pos)
        if m:
            word = m.group(0)
            end = m.end()
            if end < n and raw[end] == "." and word.lower() in ABBREVIATIONS:
                word += "."
                end += 1
            tokens.append(word)
            pos = end
        else:
            tokens.append(ch)
            pos += 1
    return tuple(tokens)


def split_sentences(raw: str) -> list[TokenSeq]:
    """Split raw text into tokenized sentences.

    Deterministic: a boundary is placed after a terminal punctuation token
    whose successor starts a new sentence (uppercase letter or opening
    quote).  Empty input yields an empty list.
    """
    tokens = tokenize(raw)
    sentences: list[TokenSeq] = []
    current: list[str] = []
    for idx, tok in enumerate(tokens):
        current.append(tok)
        if tok in _TERMINALS:
            nxt = tokens[idx + 1] if idx + 1 < len(tokens) else None
            if nxt is None or nxt[0].isupper() or nxt[0] in _OPENERS:
                sentences.append(tuple(current))
                current = []
    if current:
        sentences.append(tuple(current))
    return sentences


def detokenize(seq: TokenSeq) -> str:
    """Render a token sequence as text; single space between tokens."""
    return " ".join(seq)


def parse_document(raw: str) -> Document:
    return Document(sentences=tuple(split_sentences(raw)), source_text=raw)


def render_document(doc: Document) -> str:
    return " ".join(detokenize(s) for s in doc.sentences)


def is_punctuation(token: str) -> bool:
    return not any(ch.isalnum() for ch in token)


def is_risk_token(token: str, cfg: RiskConfig, backend) -> bool:
    """True iff the token is punctuation, a stopword, or a multi-piece word.

    Depends only on the token's own surface form (plus the pinned stopword
    list and the backend vocabulary), so classification is stable under
    substitution of other tokens.
    """
    if not token:
        raise ValueError("empty token")
    if is_punctuation(token):
        return True
    if token.lower() in cfg.stopwords:
        return True
    return not backend.is_single_piece(token)
