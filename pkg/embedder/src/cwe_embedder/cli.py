"""CLI: extract a CWE1 vector store from a corpus with a transformer."""
from __future__ import annotations

import argparse
import sys

from .pooling import LayerSpec
from .pipeline import embed_corpus


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="cwe-embed",
        description="Embed every annotated corpus instance with a "
                    "pretrained transformer into a CWE1 vector store.")
    ap.add_argument("--corpus", required=True,
                    help="corpus file (.xml UFSAC subset or .jsonl)")
    ap.add_argument("--model", required=True,
                    help="model id or local path, e.g. bert-large-uncased")
    ap.add_argument("--layers", default="concat4",
                    help="concat4 | sum4 | layer:i (default concat4)")
    ap.add_argument("--out", required=True, help="output CWE1 path")
    ap.add_argument("--use-surface", action="store_true",
                    help="re-tokenize surface forms instead of lemmas")
    args = ap.parse_args(argv)

    try:
        spec = LayerSpec.parse(args.layers)
        embed_corpus(args.corpus, args.out, model_id=args.model, spec=spec,
                     use_surface=args.use_surface)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
