"""Command-line entry point: run the sidecar under uvicorn.

Examples:

    textwm-sidecar --table synonyms.tsv --port 8321
    textwm-sidecar --mlm bert-base-cased --nli roberta-large-mnli \
        --sts sentence-transformers/stsb-roberta-base-v2
"""

from __future__ import annotations

import argparse


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="textwm-sidecar", description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8321)
    parser.add_argument("--table", metavar="TSV",
                        help="serve a deterministic synonym table instead of "
                             "the pretrained models")
    parser.add_argument("--mlm", default=None, help="masked-LM model id")
    parser.add_argument("--nli", default=None, help="NLI model id")
    parser.add_argument("--sts", default=None, help="sentence-embedding model id")
    return parser


def make_provider(args):
    if args.table:
        from .providers import TableProvider
        return TableProvider.load(args.table)
    from .models import SidecarConfig, TransformersProvider
    config = SidecarConfig()
    if args.mlm:
        config.mlm_model_id = args.mlm
    if args.nli:
        config.nli_model_id = args.nli
    if args.sts:
        config.sts_model_id = args.sts
    return TransformersProvider(config)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    import uvicorn

    from .app import create_app
    app = create_app(make_provider(args))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
