import json

import pytest

from textwm.codec import EmbeddingReport, SubstitutionRecord
from textwm.metrics import (BenchmarkFormatError, SwordsInstance, ber,
                            load_swords, payload_bpw, recovery_proportion,
                            sr_metric, ss_metric, swords_score)
from textwm.text import Document


SENT = ("We", "met", "at", "night", ".")
SUB = ("We", "met", "at", "evening", ".")


def test_sr_identical(backend):
    assert sr_metric(SENT, SENT, backend) == 1.0


def test_sr_one_substitution(backend):
    assert sr_metric(SENT, SUB, backend) == 0.99


def test_sr_requires_equal_length(backend):
    with pytest.raises(ValueError):
        sr_metric(SENT, SENT[:-1], backend)


def test_ss_identical(backend):
    assert ss_metric(SENT, SENT, backend) == 1.0


def test_ss_one_substitution(backend):
    assert ss_metric(SENT, SUB, backend) == pytest.approx(0.99)


def _report(bits_embedded, total_words):
    report = EmbeddingReport(total_words=total_words)
    for i in range(bits_embedded):
        report.records.append(SubstitutionRecord(0, i, "a", "b", "a", "b", 0))
    return report


def test_payload_zero():
    assert payload_bpw(_report(0, 100)) == 0.0


def test_payload_value():
    assert payload_bpw(_report(21, 200)) == 0.105


def test_payload_requires_words():
    with pytest.raises(ValueError):
        payload_bpw(_report(1, 0))


def test_ber_identical():
    assert ber([0, 1, 1, 0], [0, 1, 1, 0]) == 0.0


def test_ber_one_flip_in_eight():
    assert ber([0] * 8, [0] * 7 + [1]) == 0.125


def test_ber_symmetric_and_zero_iff_equal():
    a, b = [0, 1, 0, 1], [1, 1, 0, 0]
    assert ber(a, b) == ber(b, a) == 0.5
    assert ber(a, a) == 0.0


def test_ber_length_mismatch():
    with pytest.raises(ValueError):
        ber([0, 1], [0])


def test_recovery_proportion_changed_only():
    original = Document(sentences=(("a", "b", "c"),), source_text="")
    recovered = Document(sentences=(("a", "b", "c"),), source_text="")
    records = [
        SubstitutionRecord(0, 0, "a", "x", "a", "x", 1),   # changed, recovered
        SubstitutionRecord(0, 1, "b", "b", "b", "y", 0),   # unchanged, ignored
        SubstitutionRecord(0, 2, "c", "z", "c", "z", 1),   # changed, recovered
    ]
    assert recovery_proportion(recovered, original, records) == 1.0
    missed = Document(sentences=(("a", "b", "q"),), source_text="")
    assert recovery_proportion(missed, original, records) == 0.5


def test_recovery_proportion_invariant_to_unchanged_count():
    original = Document(sentences=(("a", "b"),), source_text="")
    recovered = Document(sentences=(("a", "b"),), source_text="")
    changed = [SubstitutionRecord(0, 0, "a", "x", "a", "x", 1)]
    padded = changed + [SubstitutionRecord(0, 1, "b", "b", "b", "y", 0)] * 5
    assert recovery_proportion(recovered, original, changed) == \
        recovery_proportion(recovered, original, padded)


# --- benchmark scorer -----------------------------------------------------


def _instance(context, idx, acceptable, conceivable):
    return SwordsInstance(context=context, target_index=idx,
                          acceptable=frozenset(acceptable),
                          conceivable=frozenset(conceivable))


def test_swords_hand_example():
    # 10 outputs, 4 acceptable among them, 6 acceptable overall.
    acceptable = [f"a{i}" for i in range(6)]
    outputs = [acceptable[:4] + [f"x{i}" for i in range(6)]]
    inst = _instance(("The", "w", "."), 1, acceptable,
                     acceptable + [f"x{i}" for i in range(6)])
    score = swords_score(outputs, [inst], k=10, mode="strict")
    p, r = 0.4, 4 / 6
    assert score.acceptable.precision == pytest.approx(p, abs=1e-15)
    assert score.acceptable.recall == pytest.approx(r, abs=1e-15)
    assert score.acceptable.f1 == pytest.approx(2 * p * r / (p + r), abs=1e-15)


def test_swords_perfect_system():
    acceptable = [f"a{i}" for i in range(12)]
    inst = _instance(("The", "w", "."), 1, acceptable, acceptable)
    score = swords_score([acceptable], [inst], k=10, mode="strict")
    assert score.acceptable == score.conceivable
    assert score.acceptable.precision == score.acceptable.recall == \
        score.acceptable.f1 == 1.0


def test_swords_lenient_filters_before_top_k():
    inst = _instance(("The", "w", "."), 1, ["good"], ["good", "meh"])
    outputs = [["junk1", "junk2", "good", "meh"]]
    lenient = swords_score(outputs, [inst], k=2, mode="lenient")
    strict = swords_score(outputs, [inst], k=2, mode="strict")
    assert lenient.acceptable.precision == 0.5
    assert strict.acceptable.precision == 0.0
    assert lenient.acceptable.f1 >= strict.acceptable.f1


def test_swords_empty_top_k_excluded_not_zeroed():
    inst = _instance(("The", "w", "."), 1, ["good"], ["good"])
    score = swords_score([["junk"]], [inst], k=5, mode="lenient")
    assert score.excluded == 1
    assert score.acceptable.precision == 0.0  # no scored instances


def test_swords_rejects_bad_args():
    with pytest.raises(ValueError):
        swords_score([], [], k=0)
    with pytest.raises(ValueError):
        swords_score([], [], k=5, mode="odd")
    with pytest.raises(ValueError):
        swords_score([["a"]], [], k=5)


def test_load_swords_fixture(tmp_path):
    path = tmp_path / "bench.jsonl"
    rows = [
        {"context": "We met at night.", "target_offset": 3,
         "acceptable": ["evening"], "conceivable": ["evening", "dusk"]},
        {"context": "A big house.", "target_offset": 1,
         "acceptable": ["large"], "conceivable": ["large"]},
        {"context": "The quick fox.", "target_offset": 1,
         "acceptable": [], "conceivable": ["fast"]},
    ]
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    instances = load_swords(path)
    assert len(instances) == 3
    assert instances[0].target == "night"
    assert instances[0].acceptable == {"evening"}


def test_load_swords_empty(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    assert load_swords(path) == []


def test_load_swords_rejects_subset_violation(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps({"context": "A big house.", "target_offset": 1,
                                "acceptable": ["huge"], "conceivable": ["large"]}) + "\n")
    with pytest.raises(BenchmarkFormatError) as exc:
        load_swords(path)
    assert ":1:" in str(exc.value)


def test_load_swords_rejects_target_in_gold(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps({"context": "A big house.", "target_offset": 1,
                                "acceptable": ["big"], "conceivable": ["big"]}) + "\n")
    with pytest.raises(BenchmarkFormatError):
        load_swords(path)


def test_load_swords_rejects_bad_offset(tmp_path):
    path = tmp_path / "bad.jsonl"
    path.write_text(json.dumps({"context": "A big house.", "target_offset": 9,
                                "acceptable": [], "conceivable": []}) + "\n")
    with pytest.raises(BenchmarkFormatError):
        load_swords(path)
