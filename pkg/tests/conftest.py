"""Shared fixtures: table-driven backends and a deterministic corpus generator.

The generated corpus is the workhorse for the codec property suites: all
sentences are built from three pools (synonym-table words, out-of-table
fillers, stopwords) so every scan decision is hand-checkable against the
stub table.
"""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from textwm.stub import StubBackend, StubTable
from textwm.text import Document, RiskConfig

DATA_DIR = Path(__file__).parent / "data"

# Words drawn from 2-word groups of the table; both members synchronize.
PAIR_WORDS = [
    "night", "evening", "big", "large", "quick", "fast", "house", "home",
    "happy", "glad", "begin", "start", "street", "road", "sofa", "couch",
    "gift", "present", "child", "kid",
]
# Group-maximum members only (recovery always restores these).
PAIR_MAX_WORDS = ["night", "big", "quick", "house", "happy",
                  "begin", "street", "sofa", "gift", "child"]
TRIPLE_WORDS = ["dusk", "twilight", "nightfall", "favorite", "beloved", "favored"]
FILLERS = ["zebra", "violin", "marble", "cobalt", "harbor", "meadow", "walnut"]
STOPS = ["the", "a", "at", "on", "we", "of", "and", "his"]


@pytest.fixture(scope="session")
def stub_table() -> StubTable:
    return StubTable.load(DATA_DIR / "stub_table.tsv")


@pytest.fixture(scope="session")
def backend(stub_table) -> StubBackend:
    return StubBackend(stub_table)


@pytest.fixture(scope="session")
def ablation_backend() -> StubBackend:
    return StubBackend(StubTable.load(DATA_DIR / "ablation_table.tsv"))


@pytest.fixture(scope="session")
def risk() -> RiskConfig:
    return RiskConfig.load()


def make_sentence(rng: random.Random, favored_only: bool = False) -> tuple[str, ...]:
    """One random sentence: capitalized opener, mixed body, terminal period."""
    slots = PAIR_MAX_WORDS if favored_only else PAIR_WORDS + TRIPLE_WORDS
    tokens = [rng.choice(FILLERS).capitalize()]
    if rng.random() < 0.15:
        # Long runs of carrier words make the spacing parameter bind.
        tokens.extend(rng.choice(slots) for _ in range(rng.randint(10, 14)))
    else:
        for _ in range(rng.randint(3, 9)):
            bucket = rng.random()
            if bucket < 0.45:
                tokens.append(rng.choice(slots))
            elif bucket < 0.75:
                tokens.append(rng.choice(STOPS))
            else:
                tokens.append(rng.choice(FILLERS))
    tokens.append(".")
    return tuple(tokens)


def make_corpus(n_sentences: int, seed: int = 0,
                favored_only: bool = False) -> Document:
    rng = random.Random(seed)
    sentences = tuple(make_sentence(rng, favored_only) for _ in range(n_sentences))
    return Document(sentences=sentences, source_text="")


@pytest.fixture(scope="session")
def corpus() -> Document:
    return make_corpus(120, seed=7)


@pytest.fixture(scope="session")
def big_corpus() -> Document:
    return make_corpus(1000, seed=42)


def pytest_terminal_summary(terminalreporter):
    """Print one line per release criterion exercised this run."""
    try:
        import test_acceptance
    except ImportError:
        return
    if not test_acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in test_acceptance.RESULTS:
        line = f"{status}: {name}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
