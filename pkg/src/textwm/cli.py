"""Command-line drivers: embed, extract, recover, capacity, score, eval-swords.

Exit codes: 0 success, 2 capacity shortfall / framing miss, 3 backend or
protocol mismatch, 4 input schema error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import codec
from .backend import BackendMismatch, CorruptionError
from .config import RunConfig
from .metrics import (BenchmarkFormatError, load_swords, sr_metric, ss_metric,
                      swords_score)
from .lexsub import lexical_substitution
from .stub import StubTableError
from .text import parse_document, render_document

EXIT_OK = 0
EXIT_CAPACITY = 2
EXIT_BACKEND = 3
EXIT_SCHEMA = 4


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--backend", required=True,
                        help="stub:<table-path> or remote:<url>")
    parser.add_argument("--backend-id", default=None,
                        help="expected backend id (remote backends)")
    parser.add_argument("--f", type=int, default=1, help="minimum substitution spacing")
    parser.add_argument("--k", type=int, default=32, help="candidate set size")
    parser.add_argument("--sr-threshold", type=float, default=0.95)
    parser.add_argument("--stopwords", default=None, help="stopword list file")
    parser.add_argument("--cache-dir", default=None, help="response cache directory")
    parser.add_argument("--jobs", type=int, default=1,
                        help="maximum concurrent backend requests")


def _config(args) -> RunConfig:
    return RunConfig(backend_spec=args.backend, f=args.f, k=args.k,
                     sr_threshold=args.sr_threshold, stopwords_path=args.stopwords,
                     backend_id=args.backend_id, cache_dir=args.cache_dir,
                     jobs=args.jobs,
                     swords_k=getattr(args, "swords_k", 10))


def _read_bits(args) -> list[int] | None:
    if args.bits is not None:
        if not set(args.bits) <= {"0", "1"}:
            raise ValueError("--bits must be a string of 0s and 1s")
        return [int(b) for b in args.bits]
    return None


def _write_report(path: str | None, header: dict, records) -> None:
    if path is None:
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"type": "config", **header}) + "\n")
        for rec in records:
            fh.write(json.dumps(rec.to_json_dict()) + "\n")


def cmd_embed(args) -> int:
    cfg = _config(args)
    backend = cfg.make_backend()
    risk = cfg.risk_config()
    params = cfg.codec_params()
    with open(args.input, encoding="utf-8") as fh:
        doc = parse_document(fh.read())

    capacity = codec.probe_capacity(doc, backend, risk, params)
    if args.probe_capacity:
        print(json.dumps({"capacity_bits": capacity, "total_words": doc.total_words,
                          **cfg.echo(backend, risk)}))
        return EXIT_OK

    raw_bits = _read_bits(args)
    if raw_bits is not None:
        bits = codec.BitSource(raw_bits)
        needed = len(raw_bits)
    elif args.message is not None:
        with open(args.message, "rb") as fh:
            payload = fh.read()
        frame = codec.frame_message(payload)
        needed = len(frame)
        bits = codec.BitSource.cycle(frame)
    else:
        bits = codec.BitSource([])
        needed = 0

    if args.strict_capacity and capacity < needed:
        print(f"capacity {capacity} bits < required {needed} bits", file=sys.stderr)
        return EXIT_CAPACITY

    marked, report = codec.embed_document(doc, bits, backend, risk, params)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(render_document(marked) + "\n")
    _write_report(args.report, cfg.echo(backend, risk), report.records)
    print(json.dumps({"bits_embedded": report.bits_embedded,
                      "capacity_bits": capacity,
                      "total_words": doc.total_words}))
    return EXIT_OK


def cmd_extract(args) -> int:
    cfg = _config(args)
    backend = cfg.make_backend()
    risk = cfg.risk_config()
    with open(args.input, encoding="utf-8") as fh:
        doc = parse_document(fh.read())
    bits, records = codec.extract_document(doc, backend, risk, cfg.codec_params())
    result = codec.deframe_message(bits)
    _write_report(args.report, cfg.echo(backend, risk), records)
    print(json.dumps({
        "bits": "".join(str(b) for b in bits),
        "payload_hex": result.payload.hex(),
        "complete": result.complete,
        "repetitions": result.repetitions,
    }))
    if not result.complete:
        print("no complete frame recoverable", file=sys.stderr)
        return EXIT_CAPACITY
    return EXIT_OK


def cmd_recover(args) -> int:
    cfg = _config(args)
    backend = cfg.make_backend()
    risk = cfg.risk_config()
    with open(args.input, encoding="utf-8") as fh:
        doc = parse_document(fh.read())
    _, records = codec.extract_document(doc, backend, risk, cfg.codec_params())
    recovered, recovery_records = codec.recover_document(doc, records, backend, risk)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(render_document(recovered) + "\n")
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"type": "config", **cfg.echo(backend, risk)}) + "\n")
            for rec in recovery_records:
                fh.write(json.dumps({
                    "sentence_idx": rec.sentence_idx, "position": rec.position,
                    "watermarked": rec.watermarked, "recovered": rec.recovered,
                }) + "\n")
    print(json.dumps({"positions": len(recovery_records)}))
    return EXIT_OK


def cmd_score(args) -> int:
    cfg = _config(args)
    backend = cfg.make_backend()
    risk = cfg.risk_config()
    with open(args.original, encoding="utf-8") as fh:
        orig = parse_document(fh.read())
    with open(args.marked, encoding="utf-8") as fh:
        marked = parse_document(fh.read())
    if len(orig.sentences) != len(marked.sentences):
        print("documents have different sentence counts", file=sys.stderr)
        return EXIT_SCHEMA
    pairs = list(zip(orig.sentences, marked.sentences))
    sr = [sr_metric(a, b, backend) for a, b in pairs]
    ss = [ss_metric(a, b, backend) for a, b in pairs]
    print(json.dumps({
        "mean_sr": sum(sr) / len(sr) if sr else 1.0,
        "mean_ss": sum(ss) / len(ss) if ss else 1.0,
        "sentences": len(pairs),
        **cfg.echo(backend, risk),
    }))
    return EXIT_OK


def cmd_eval_swords(args) -> int:
    cfg = _config(args)
    backend = cfg.make_backend()
    risk = cfg.risk_config()
    instances = load_swords(args.benchmark)
    outputs = []
    for inst in instances:
        ranked = lexical_substitution(inst.context, inst.target_index, cfg.k, backend)
        # The benchmark's judgment lists never contain the target itself.
        outputs.append([w for w in ranked.words() if w != inst.target])
    result = {}
    for mode in ("lenient", "strict"):
        score = swords_score(outputs, instances, k=cfg.swords_k, mode=mode)
        result[mode] = {
            "P": score.acceptable.precision, "R": score.acceptable.recall,
            "F": score.acceptable.f1,
            "Pc": score.conceivable.precision, "Rc": score.conceivable.recall,
            "Fc": score.conceivable.f1,
            "instances": score.instances, "excluded": score.excluded,
        }
    print(json.dumps({**result, **cfg.echo(backend, risk)}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="textwm",
                                     description="Lexical-substitution text watermarking")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", help="embed a message into a document")
    p.add_argument("input")
    p.add_argument("--out", required=False, default="/dev/null")
    p.add_argument("--report", default=None)
    p.add_argument("--message", default=None, help="payload file (raw bytes)")
    p.add_argument("--bits", default=None, help="explicit bit string, no framing")
    p.add_argument("--probe-capacity", action="store_true")
    p.add_argument("--strict-capacity", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("extract", help="extract the watermark bit stream")
    p.add_argument("input")
    p.add_argument("--report", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("recover", help="reconstruct the pre-watermark text")
    p.add_argument("input")
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("capacity", help="report embedding capacity in bits")
    p.add_argument("input")
    _add_common(p)
    p.set_defaults(func=cmd_embed, probe_capacity=True, bits=None, message=None,
                   strict_capacity=False, out="/dev/null", report=None)

    p = sub.add_parser("score", help="semantic quality of a watermarked document")
    p.add_argument("original")
    p.add_argument("marked")
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("eval-swords", help="run the substitution benchmark")
    p.add_argument("benchmark")
    p.add_argument("--swords-k", type=int, default=10)
    _add_common(p)
    p.set_defaults(func=cmd_eval_swords)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BackendMismatch as exc:
        print(f"backend mismatch: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except CorruptionError as exc:
        print(f"extraction corruption: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (BenchmarkFormatError, StubTableError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA


if __name__ == "__main__":
    sys.exit(main())
