"""Command-line entry point: stats, build, eval, sweep, neighbors, project, mfs.

All diagnostics go to stderr; data goes to stdout or --out.  Exit code 0
iff the operation completed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import evaluation, projection, sense_index, vectors
from .corpus import InstanceKey, Keying, compute_stats, load_corpus, word_key
from .evaluation import TableFormat
from .sense_index import Backoff

DEFAULT_K_GRID = list(range(1, 11)) + [50, 100, 500, 1000]


class CliError(Exception):
    pass


def _emit(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


def _load_corpus(path: str, fmt: str | None):
    if not Path(path).exists():
        raise CliError(f"corpus file not found: {path}")
    try:
        return load_corpus(path, fmt)
    except corpus_mod.CorpusError as exc:
        raise CliError(f"cannot parse {path}: {exc}") from exc


def _load_store(path: str) -> vectors.VectorStore:
    if not Path(path).exists():
        raise CliError(f"vector store not found: {path}")
    try:
        return vectors.load_store(path)
    except vectors.StoreFormatError as exc:
        raise CliError(f"cannot read vector store {path}: {exc}") from exc


def _load_index(path: str) -> sense_index.SenseIndex:
    if not Path(path).exists():
        raise CliError(f"index file not found: {path}")
    try:
        return sense_index.load_index(Path(path).read_bytes())
    except ValueError as exc:
        raise CliError(f"cannot load index {path}: {exc}") from exc


def cmd_stats(args) -> int:
    corpus = _load_corpus(args.corpus, args.format)
    keying = Keying(args.keying)
    s = compute_stats(corpus, keying)
    rows = [
        ("#sentences", str(s.n_sentences)),
        ("#CWEs", str(s.n_instances)),
        ("#distinct words", str(s.n_distinct_words)),
        ("#senses", str(s.n_senses)),
        ("avg #senses p. word", f"{s.avg_senses_per_word:.2f}"),
        ("avg #CWEs p. word & sense", f"{s.avg_instances_per_word_sense:.2f}"),
        ("avg k'", f"{s.avg_k_prime:.2f}"),
    ]
    for pos in ("NOUN", "ADJ", "VERB"):
        rows.append((f"% senses {pos}", f"{s.pos_distribution.get(pos, 0.0):.2f}"))
    other = (s.pos_distribution.get("ADV", 0.0)
             + s.pos_distribution.get("OTHER", 0.0))
    rows.append(("% senses Other", f"{other:.2f}"))
    if args.table_format == "markdown":
        lines = ["| statistic | value |", "|---|---|"]
        lines += [f"| {k} | {v} |" for k, v in rows]
    else:
        lines = [f"{k}\t{v}" for k, v in rows]
    _emit(("\n".join(lines) + "\n").encode(), args.out)
    return 0


def cmd_build(args) -> int:
    corpus = _load_corpus(args.corpus, args.format)
    store = _load_store(args.vectors)
    index = sense_index.build_index(corpus, store, Keying(args.keying))
    n_indexed = sum(len(b) for b in index.buckets.values())
    print(f"indexed {n_indexed} instances in {len(index.buckets)} buckets; "
          f"{len(index.missing)} annotated instances lack vectors",
          file=sys.stderr)
    Path(args.out).write_bytes(sense_index.save_index(index))
    return 0


def _eval_common(args):
    index = _load_index(args.index)
    test = _load_corpus(args.test_corpus, args.format)
    store = _load_store(args.test_vectors)
    return index, test, store


def cmd_eval(args) -> int:
    index, test, store = _eval_common(args)
    result = evaluation.evaluate(index, test, store, args.k,
                                 Backoff(args.backoff))
    _emit(evaluation.render_table(result, TableFormat(args.table_format)),
          args.out)
    return 0


def cmd_sweep(args) -> int:
    index, test, store = _eval_common(args)
    ks = args.k or DEFAULT_K_GRID
    result = evaluation.sweep_k(index, test, store, ks, Backoff(args.backoff))
    if args.with_mfs:
        result.mfs = evaluation.evaluate_mfs(index, test)
    _emit(evaluation.render_table(result, TableFormat(args.table_format)),
          args.out)
    return 0


def cmd_mfs(args) -> int:
    index = _load_index(args.index)
    test = _load_corpus(args.test_corpus, args.format)
    result = evaluation.evaluate_mfs(index, test)
    _emit(evaluation.render_table(result, TableFormat(args.table_format)),
          args.out)
    return 0


def cmd_neighbors(args) -> int:
    index = _load_index(args.index)
    store = _load_store(args.test_vectors)
    test = _load_corpus(args.test_corpus, args.format)
    train = _load_corpus(args.train_corpus, args.format) if args.train_corpus else None

    key = InstanceKey.parse(args.instance)
    try:
        sent = test.sentence(key.sentence_id)
        token = sent.tokens[key.token_index]
    except (KeyError, IndexError):
        raise CliError(f"instance {args.instance} not found in test corpus")
    vec = store.lookup(key)
    if vec is None:
        raise CliError(f"no vector for instance {args.instance}")
    wk = word_key(token.lemma, token.pos, index.keying)
    if wk not in index.buckets:
        raise CliError(f"word key {wk} not in index")

    lines = [f"query\t{key}\t{token.lemma}\t{token.pos or ''}\t{sent.text}"]
    for entry, dist in sense_index.neighbors(index, wk, vec, args.n):
        text = ""
        if train is not None:
            try:
                text = train.sentence(entry.provenance.sentence_id).text
            except KeyError:
                pass
        lines.append(f"{entry.provenance}\t{dist:.6f}\t{entry.sense}\t{text}")
    _emit(("\n".join(lines) + "\n").encode(), args.out)
    return 0


def cmd_project(args) -> int:
    corpus = _load_corpus(args.corpus, args.format)
    store = _load_store(args.vectors)
    lemma = args.lemma.lower()

    vecs, labels, provenance = [], [], []
    missing = 0
    for key, lem, pos, sense in corpus_mod.annotated_instances(corpus):
        if lem != lemma:
            continue
        if args.pos and pos != args.pos.upper():
            continue
        vec = store.lookup(key)
        if vec is None:
            missing += 1
            continue
        vecs.append(np.asarray(vec, dtype=np.float64))
        labels.append(sense)
        provenance.append(str(key))
    if missing:
        print(f"{missing} instances of {lemma!r} lack vectors", file=sys.stderr)
    if len(vecs) < 3:
        raise CliError(f"need at least 3 embedded instances of {lemma!r}, "
                       f"found {len(vecs)}")

    config = projection.ProjectionConfig(
        perplexity=args.perplexity, iterations=args.iterations,
        learning_rate=args.learning_rate, seed=args.seed,
        normalize=args.normalize)
    coords, trace = projection.tsne(vecs, labels, provenance, config,
                                    return_trace=True)
    csv = projection.export_plot_data(coords, args.min_label_frequency)
    _emit(f"# seed={args.seed}\n".encode() + csv, args.out)
    if args.trace_out:
        Path(args.trace_out).write_bytes(projection.export_trace(trace))
    return 0


def _add_corpus_format(p) -> None:
    p.add_argument("--format", choices=["xml", "jsonl"], default=None,
                   help="corpus format (default: by file extension)")


def _add_table_format(p) -> None:
    p.add_argument("--table-format", choices=["tsv", "markdown"],
                   default="tsv")


def _add_eval_args(p) -> None:
    p.add_argument("index", help="sense index file")
    p.add_argument("test_corpus")
    p.add_argument("test_vectors", help="CWE1 store for the test corpus")
    p.add_argument("--backoff", choices=["none", "mfs"], default="none")
    _add_corpus_format(p)
    _add_table_format(p)
    p.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wsdknn",
        description="Localized kNN word sense disambiguation over "
                    "precomputed contextualized embeddings.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="corpus statistics table")
    p.add_argument("corpus")
    p.add_argument("--keying", choices=["lemma", "lemma+pos"], default="lemma")
    _add_corpus_format(p)
    _add_table_format(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("build", help="build a sense index")
    p.add_argument("corpus")
    p.add_argument("vectors", help="CWE1 store for the training corpus")
    p.add_argument("--keying", choices=["lemma", "lemma+pos"], default="lemma")
    _add_corpus_format(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("eval", help="evaluate at a single k")
    _add_eval_args(p)
    p.add_argument("-k", type=int, default=1)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="evaluate over a k grid")
    _add_eval_args(p)
    p.add_argument("-k", type=int, nargs="+", default=None,
                   help="k grid (default 1..10, 50, 100, 500, 1000)")
    p.add_argument("--with-mfs", action="store_true",
                   help="append an MFS baseline row")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("mfs", help="most-frequent-sense baseline")
    p.add_argument("index")
    p.add_argument("test_corpus")
    _add_corpus_format(p)
    _add_table_format(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_mfs)

    p = sub.add_parser("neighbors", help="nearest-neighbor provenance report")
    p.add_argument("index")
    p.add_argument("test_corpus")
    p.add_argument("test_vectors")
    p.add_argument("instance", help="instance key, e.g. s12#3")
    p.add_argument("-n", type=int, default=5)
    p.add_argument("--train-corpus", default=None,
                   help="include training sentence text in the report")
    _add_corpus_format(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_neighbors)

    p = sub.add_parser("project", help="t-SNE projection of a word's senses")
    p.add_argument("corpus")
    p.add_argument("vectors")
    p.add_argument("lemma")
    p.add_argument("--pos", default=None)
    p.add_argument("--min-label-frequency", type=int, default=2)
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--learning-rate", type=float, default=200.0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--normalize", action="store_true",
                   help="length-normalize vectors before projection")
    p.add_argument("--trace-out", default=None,
                   help="write the KL objective trace CSV here")
    _add_corpus_format(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_project)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
