"""Pinned suffix-stripping stemmer for the morphological-derivation filter.

Two words count as morphological derivations of each other iff their
stems are equal while their surface forms differ.  The rules are frozen:
changing them would silently desynchronize embedding and extraction, so
treat this module as versioned data.
"""

from __future__ import annotations

STEMMER_VERSION = "stem-en-1"

# Longest match wins; a single suffix is stripped per word.
_SUFFIXES = (
    "ingly", "edly", "iest", "ies", "ied", "ing", "est",
    "ers", "ed", "er", "ly", "es", "s",
)


def stem(word: str) -> str:
    w = word.lower()
    for suffix in _SUFFIXES:
        base = len(w) - len(suffix)
        if w.endswith(suffix) and base >= 3:
            w = w[:base]
            break
    if len(w) >= 4 and w[-1] == w[-2] and w[-1] not in "aeiou":
        w = w[:-1]
    if len(w) > 3 and w.endswith("e"):
        w = w[:-1]
    return w


def is_derivation(candidate: str, target: str) -> bool:
    """True iff candidate is a surface-different morphological variant."""
    return candidate != target and stem(candidate) == stem(target)
