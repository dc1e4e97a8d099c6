"""Extraction command line: `embextract --model NAME --images DIR --out FILE`."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .extract import ExtractorConfig, extract, supported_models
from .models import ModelUnavailableError, UnknownModelError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embextract",
        description="Embed an image directory into an EMB1 file with a pretrained vision encoder.",
    )
    parser.add_argument("--model", required=True, help=f"one of: {', '.join(supported_models())}")
    parser.add_argument("--images", required=True, type=Path, help="image directory")
    parser.add_argument("--out", required=True, type=Path, help="output EMB1 path")
    parser.add_argument("--batch-size", type=int, default=16)
    parser.add_argument("--device", default="cpu")
    parser.add_argument(
        "--pretrained",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="--no-pretrained uses randomly initialized weights (smoke tests)",
    )
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = ExtractorConfig(
            model=args.model,
            images=args.images,
            out=args.out,
            batch_size=args.batch_size,
            device=args.device,
            pretrained=args.pretrained,
        )
        result = extract(config)
    except (UnknownModelError, ModelUnavailableError, FileNotFoundError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(
        f"wrote {result.out}: n={result.n}, d={result.d}"
        + (f", skipped {result.skipped} undecodable" if result.skipped else "")
    )
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
