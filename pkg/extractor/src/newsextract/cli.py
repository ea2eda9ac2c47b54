"""Command line front end.

Commands: clean (raw corpus to normalized tables), embed (texts.tsv to
features.tsv and words.tsv), run (both in one pass). Raw input comes
from LIAR split files, a FakeNewsNet checkout, or JSONL records, in
any combination.

Exit codes: 0 ok, 1 usage, 2 bad data, 3 encoder unavailable.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .encoder import load_encoder
from .errors import DataError, EncoderUnavailableError
from .extract import embed_texts, extract_corpus, read_texts_tsv
from .records import clean, read_fakenewsnet, read_jsonl, read_liar, write_tables

USAGE_EXIT, DATA_EXIT, ENCODER_EXIT = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--liar", action="append", default=[], metavar="FILE",
                   help="LIAR split file (repeatable)")
    p.add_argument("--fakenewsnet", metavar="DIR",
                   help="FakeNewsNet checkout root")
    p.add_argument("--jsonl", action="append", default=[], metavar="FILE",
                   help="JSONL records file (repeatable)")


def _add_embed_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model-dir", required=True, help="saved encoder directory")
    p.add_argument("--mode", choices=("pretrained", "finetuned"),
                   default="pretrained")
    p.add_argument("--q", type=int, default=3, help="word graph neighbourhood radius")
    p.add_argument("--alpha", type=float, default=0.85, help="restart strength in [0, 1)")
    p.add_argument("--tol", type=float, default=1e-9, help="series truncation tolerance")


def _build_parser() -> _Parser:
    parser = _Parser(prog="newsextract", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clean", parents=[], help="normalize a raw corpus")
    _add_input_flags(p)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("embed", help="embed texts.tsv rows")
    _add_embed_flags(p)
    p.add_argument("--texts", required=True, help="texts.tsv from a clean run")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("run", help="clean and embed in one pass")
    _add_input_flags(p)
    _add_embed_flags(p)
    p.add_argument("--out", required=True, help="output directory")

    return parser


def _gather(args) -> list:
    records = []
    for path in args.liar:
        records.extend(read_liar(path))
    if args.fakenewsnet:
        records.extend(read_fakenewsnet(args.fakenewsnet))
    for path in args.jsonl:
        records.extend(read_jsonl(path))
    if not records:
        raise ValueError("no input: pass --liar, --fakenewsnet or --jsonl")
    return records


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "clean":
            counts = write_tables(clean(_gather(args)), args.out)
        elif args.command == "embed":
            enc = load_encoder(args.model_dir, mode=args.mode)
            counts = embed_texts(
                read_texts_tsv(args.texts), enc, args.out,
                q=args.q, alpha=args.alpha, tol=args.tol,
            )
        else:
            enc = load_encoder(args.model_dir, mode=args.mode)
            counts = extract_corpus(
                _gather(args), enc, args.out,
                q=args.q, alpha=args.alpha, tol=args.tol,
            )
    except DataError as exc:
        print(f"newsextract: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"newsextract: {exc}", file=sys.stderr)
        return DATA_EXIT
    except EncoderUnavailableError as exc:
        print(f"newsextract: {exc}", file=sys.stderr)
        return ENCODER_EXIT
    except ValueError as exc:
        print(f"newsextract: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except SystemExit as exc:
        return int(exc.code or 0)
    print(json.dumps(counts, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
