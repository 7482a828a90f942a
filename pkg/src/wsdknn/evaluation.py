"""Scoring (precision/recall/F1), full evaluations, k-sweeps and tables.

A prediction is correct iff it matches any of the instance's gold sense
keys.  Instances the classifier abstains on, or whose vectors are
missing from the store, count as recall loss: attempted + abstained +
missing_vectors = total, and F1 is computed from P = correct/attempted,
R = correct/total.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .corpus import Corpus, InstanceKey, Keying, word_key
from .sense_index import (Backoff, Method, SenseIndex, effective_k,
                          mfs_predict, ranked_neighbors, _plurality)
from .vectors import VectorStore


class TableFormat(str, Enum):
    TSV = "tsv"
    MARKDOWN = "markdown"


@dataclass
class EvalResult:
    attempted: int
    correct: int
    total: int
    precision: float
    recall: float
    f1: float
    per_pos: dict[str, tuple[int, int, int]] = field(default_factory=dict)
    missing_vectors: int = 0
    abstained: int = 0


@dataclass
class SweepResult:
    rows: list[tuple[int, EvalResult]]
    mfs: Optional[EvalResult] = None


def _prf(attempted: int, correct: int, total: int) -> tuple[float, float, float]:
    p = correct / attempted if attempted else 0.0
    r = correct / total if total else 0.0
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f1


def _result(attempted, correct, total, per_pos=None,
            missing_vectors=0, abstained=0) -> EvalResult:
    p, r, f1 = _prf(attempted, correct, total)
    return EvalResult(attempted, correct, total, p, r, f1,
                      per_pos or {}, missing_vectors, abstained)


def score(predictions: Sequence[tuple[InstanceKey, Optional[str]]],
          gold: Sequence[tuple[InstanceKey, set[str]]]) -> EvalResult:
    """Score (instance, predicted sense) pairs against gold key sets.

    A None prediction counts as abstention.  Raises on predictions for
    instances not in the gold list.
    """
    gold_map = {k: s for k, s in gold}
    attempted = correct = abstained = 0
    seen = set()
    for key, sense in predictions:
        if key not in gold_map:
            raise ValueError(f"prediction for unknown instance {key}")
        if key in seen:
            raise ValueError(f"duplicate prediction for {key}")
        seen.add(key)
        if sense is None:
            abstained += 1
        else:
            attempted += 1
            if sense in gold_map[key]:
                correct += 1
    total = len(gold_map)
    missing = total - attempted - abstained
    return _result(attempted, correct, total,
                   missing_vectors=missing, abstained=abstained)


class _Tally:
    """Accumulates outcomes overall and per POS bucket."""

    def __init__(self):
        self.attempted = self.correct = self.total = 0
        self.missing = self.abstained = 0
        self.per_pos: dict[str, list[int]] = {}

    def record(self, pos: Optional[str], outcome: str, correct: bool = False):
        bucket = self.per_pos.setdefault(pos or "OTHER", [0, 0, 0])
        self.total += 1
        bucket[2] += 1
        if outcome == "missing":
            self.missing += 1
        elif outcome == "abstained":
            self.abstained += 1
        else:
            self.attempted += 1
            bucket[0] += 1
            if correct:
                self.correct += 1
                bucket[1] += 1

    def result(self) -> EvalResult:
        per_pos = {p: tuple(v) for p, v in sorted(self.per_pos.items())}
        return _result(self.attempted, self.correct, self.total, per_pos,
                       self.missing, self.abstained)


def _test_instances(test: Corpus, keying: Keying):
    """(instance key, word key, pos, gold sense set) per annotated token."""
    for sent in test.sentences:
        for i, tok in enumerate(sent.tokens):
            if tok.senses:
                wk = word_key(tok.lemma, tok.pos, keying)
                yield InstanceKey(sent.id, i), wk, tok.pos, set(tok.senses)


def evaluate(index: SenseIndex, test: Corpus, test_store: VectorStore,
             k: int, backoff: Backoff = Backoff.NONE,
             keying: Optional[Keying] = None) -> EvalResult:
    """Classify every annotated test instance with a vector and score it."""
    sweep = sweep_k(index, test, test_store, [k], backoff, keying)
    return sweep.rows[0][1]


def sweep_k(index: SenseIndex, test: Corpus, test_store: VectorStore,
            ks: Sequence[int], backoff: Backoff = Backoff.NONE,
            keying: Optional[Keying] = None) -> SweepResult:
    """Evaluate a grid of k values, ranking each instance's bucket once."""
    if not ks:
        raise ValueError("empty k list")
    if list(ks) != sorted(set(ks)) or ks[0] < 1:
        raise ValueError("k values must be >= 1, ascending and distinct")
    if keying is None:
        keying = index.keying
    if keying is not index.keying:
        raise ValueError(f"index keyed by {index.keying.value}, "
                         f"requested {keying.value}")
    if test_store.dim != index.dim:
        raise ValueError(f"test store dim {test_store.dim} != "
                         f"index dim {index.dim}")

    tallies = {k: _Tally() for k in ks}
    for key, wk, pos, gold in _test_instances(test, keying):
        vec = test_store.lookup(key)
        if vec is None:
            for t in tallies.values():
                t.record(pos, "missing")
            continue
        if wk not in index.buckets:
            if backoff is Backoff.GLOBAL_MFS:
                sense = index.global_mfs()
                for t in tallies.values():
                    t.record(pos, "attempted", sense in gold)
            else:
                for t in tallies.values():
                    t.record(pos, "abstained")
            continue
        ranked = ranked_neighbors(index, wk, vec)
        for k, t in tallies.items():
            k_prime = effective_k(index, wk, k)
            sense = _plurality(ranked[:k_prime])
            t.record(pos, "attempted", sense in gold)
    return SweepResult(rows=[(k, tallies[k].result()) for k in ks])


def evaluate_mfs(index: SenseIndex, test: Corpus,
                 keying: Optional[Keying] = None) -> EvalResult:
    """Most-frequent-sense baseline over all annotated test instances."""
    if keying is None:
        keying = index.keying
    if keying is not index.keying:
        raise ValueError(f"index keyed by {index.keying.value}, "
                         f"requested {keying.value}")
    tally = _Tally()
    for _, wk, pos, gold in _test_instances(test, keying):
        pred = mfs_predict(index, wk)
        if pred.sense is None:
            tally.record(pos, "abstained")
        else:
            tally.record(pos, "attempted", pred.sense in gold)
    return tally.result()


def _pct(x: float) -> str:
    return f"{100.0 * x:.2f}"


_EVAL_COLS = ("attempted", "correct", "total", "missing", "abstained",
              "P%", "R%", "F1%")


def _eval_cells(r: EvalResult) -> list[str]:
    return [str(r.attempted), str(r.correct), str(r.total),
            str(r.missing_vectors), str(r.abstained),
            _pct(r.precision), _pct(r.recall), _pct(r.f1)]


def render_table(result, fmt: TableFormat = TableFormat.TSV) -> bytes:
    """Deterministic TSV or Markdown table; percentages with 2 decimals."""
    if isinstance(result, EvalResult):
        header = list(_EVAL_COLS)
        rows = [_eval_cells(result)]
    elif isinstance(result, SweepResult):
        header = ["k"] + list(_EVAL_COLS)
        rows = [[str(k)] + _eval_cells(r) for k, r in result.rows]
        if result.mfs is not None:
            rows.append(["MFS"] + _eval_cells(result.mfs))
    else:
        raise TypeError(f"cannot render {type(result).__name__}")

    if fmt is TableFormat.TSV:
        lines = ["\t".join(header)] + ["\t".join(r) for r in rows]
    else:
        lines = ["| " + " | ".join(header) + " |",
                 "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
    return ("\n".join(lines) + "\n").encode("utf-8")
