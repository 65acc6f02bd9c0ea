"""Walk through embedding and blind extraction on a small document.

Uses the deterministic table backend shipped with the test suite, so
every number printed here can be checked by hand against the table.

Run from the repository root:

    python3 demos/demo_watermark.py
"""

from pathlib import Path

from textwm.codec import BitSource, embed_document, extract_document, probe_capacity
from textwm.stub import StubBackend, StubTable
from textwm.text import RiskConfig, detokenize, parse_document

TABLE = Path(__file__).resolve().parent.parent / "tests" / "data" / "stub_table.tsv"

TEXT = ("We met at night and we sat on the sofa . "
        "Marble was a big house on a quick street and a happy child . "
        "Harbor child got a gift at dusk .")


def main() -> None:
    backend = StubBackend(StubTable.load(TABLE))
    risk = RiskConfig.load()
    doc = parse_document(TEXT)

    capacity = probe_capacity(doc, backend, risk)
    print(f"cover text ({doc.total_words} words, capacity {capacity} bits):")
    for sent in doc.sentences:
        print("  " + detokenize(sent))

    # Fill the capacity exactly: a blind extractor reads every carrier
    # position, so partial messages need the framing layer (see
    # demo_recovery.py) to mark where the payload ends.
    message = ([1, 0, 1, 1, 0, 0, 1, 0] * capacity)[:capacity]
    print(f"\nembedding bits {message} ...")
    marked, report = embed_document(doc, BitSource(message), backend, risk)
    for rec in report.records:
        action = (f"'{rec.original}' -> '{rec.chosen}'"
                  if rec.chosen != rec.original else f"'{rec.original}' kept")
        print(f"  bit {rec.bit} at sentence {rec.sentence_idx}, "
              f"word {rec.position}: {action}  (pair {rec.c1}/{rec.c2})")

    print("\nwatermarked text:")
    for sent in marked.sentences:
        print("  " + detokenize(sent))

    # Blind extraction: only the watermarked text is needed.
    extracted, _ = extract_document(marked, backend, risk)
    print(f"\nextracted bits: {extracted}")
    assert extracted == message, "extraction must invert embedding"
    print("roundtrip exact: extracted bits equal the embedded message")


if __name__ == "__main__":
    main()
