"""Command-line exporter: raw text (or the SNIPS tree) to pipeline inputs.

    openintent-export --input <path|snips> --model <id> --out-dir <dir>
                      [--skip-embeddings] [--skip-parses]

Writes corpus.jsonl always, embeddings.emb1 unless skipped, and
parses.conllu unless skipped. `--input snips` reads the benchmark tree
from the SNIPS_DIR environment variable. Exit codes: 0 success,
1 validation/usage, 2 I/O.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from .corpus import export_corpus, load_snips, load_text, make_ids
from .embeddings import export_embeddings
from .errors import ExportError
from .parses import export_parses


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise ExportError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="openintent-export", add_help=True)
    parser.add_argument("--input", required=True, help="text file path, or 'snips'")
    parser.add_argument("--model", help="encoder id (alias or checkpoint name)")
    parser.add_argument("--out-dir", required=True, help="output directory")
    parser.add_argument("--skip-embeddings", action="store_true")
    parser.add_argument("--skip-parses", action="store_true")
    return parser


def run(argv: Sequence[str]) -> None:
    argv = list(argv)
    if argv[:1] == ["export"]:  # tolerate a subcommand-style invocation
        argv = argv[1:]
    args = build_parser().parse_args(argv)

    if args.input == "snips":
        root = os.environ.get("SNIPS_DIR")
        if not root:
            raise ExportError(
                "--input snips requires the SNIPS_DIR environment variable "
                "to point at the benchmark directory"
            )
        records = load_snips(root)
    else:
        records = load_text(args.input)
    texts = [r["text"] for r in records]
    ids = make_ids(len(records))

    path = export_corpus(records, args.out_dir)
    print(f"wrote {path} ({len(records)} utterances)")

    if not args.skip_embeddings:
        if not args.model:
            raise ExportError("--model is required unless --skip-embeddings is set")
        path = export_embeddings(texts, args.model, args.out_dir)
        print(f"wrote {path}")

    if not args.skip_parses:
        path = export_parses(ids, texts, args.out_dir)
        print(f"wrote {path}")


def main(argv: Sequence[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        run(argv)
    except ExportError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
