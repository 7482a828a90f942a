"""Localized per-word sense index and the class-balanced kNN classifier.

Classification is restricted to training instances sharing the target's
word key (lemma, or lemma+POS).  The vote-set size is reduced from k to
k' = min(k, c_min), where c_min is the smallest instance count among the
word's observed senses, which keeps skewed sense distributions from
letting the majority class dominate large-k votes.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from .corpus import Corpus, InstanceKey, Keying, annotated_instances, word_key
from .vectors import VectorStore, cosine_distance, read_store, write_store

INDEX_MAGIC = b"SKNNIDX1"
INDEX_VERSION = 1

WordKey = tuple[str, Optional[str]]


class Backoff(str, Enum):
    """Behavior for word keys never seen in training."""

    NONE = "none"
    GLOBAL_MFS = "mfs"


class Method(str, Enum):
    KNN = "knn"
    MFS_BACKOFF = "mfs"
    ABSTAIN = "abstain"


@dataclass(frozen=True, eq=False)
class IndexEntry:
    vector: np.ndarray
    sense: str
    provenance: InstanceKey


@dataclass
class Prediction:
    sense: Optional[str]
    k_used: int
    neighbors: list[tuple[IndexEntry, float]]
    method: Method


@dataclass
class SenseIndex:
    dim: int
    keying: Keying
    buckets: dict[WordKey, list[IndexEntry]] = field(default_factory=dict)
    # annotated training instances that had no vector in the store
    missing: tuple[str, ...] = field(default=(), compare=False)

    def sense_counts(self, key: WordKey) -> Counter:
        return Counter(e.sense for e in self.buckets[key])

    def global_mfs(self) -> Optional[str]:
        """Most frequent sense across all buckets; ties lexicographic."""
        totals: Counter = Counter()
        for entries in self.buckets.values():
            for e in entries:
                totals[e.sense] += 1
        if not totals:
            return None
        best = max(totals.values())
        return min(s for s, c in totals.items() if c == best)


def build_index(train: Corpus, store: VectorStore,
                keying: Keying = Keying.LEMMA) -> SenseIndex:
    """Index every annotated training instance that has a vector.

    Instances missing from the store are recorded on ``index.missing``
    rather than raising; coverage loss must stay visible downstream.
    """
    index = SenseIndex(dim=store.dim, keying=keying)
    missing = []
    for key, lemma, pos, sense in annotated_instances(train):
        vec = store.lookup(key)
        if vec is None:
            missing.append(str(key))
            continue
        wk = word_key(lemma, pos, keying)
        index.buckets.setdefault(wk, []).append(
            IndexEntry(vector=vec, sense=sense, provenance=key))
    index.missing = tuple(missing)
    return index


def effective_k(index: SenseIndex, key: WordKey, k: int) -> int:
    """k' = min(k, c_min) with c_min the word's least-populated sense count."""
    if key not in index.buckets:
        raise KeyError(f"word key {key!r} not in index")
    if k < 1:
        raise ValueError("k must be >= 1")
    c_min = min(index.sense_counts(key).values())
    return min(k, c_min)


def ranked_neighbors(index: SenseIndex, key: WordKey,
                     query: np.ndarray) -> list[tuple[IndexEntry, float]]:
    """Full bucket ranked by (distance, provenance); deterministic."""
    if key not in index.buckets:
        raise KeyError(f"word key {key!r} not in index")
    if len(query) != index.dim:
        raise ValueError(f"query dim {len(query)} != index dim {index.dim}")
    scored = [(e, cosine_distance(e.vector, query)) for e in index.buckets[key]]
    scored.sort(key=lambda p: (p[1], p[0].provenance))
    return scored


def _plurality(vote_set: list[tuple[IndexEntry, float]]) -> str:
    """Plurality sense; ties by smallest summed distance, then lexicographic."""
    votes: Counter = Counter()
    dist_sum: dict[str, float] = {}
    for entry, dist in vote_set:
        votes[entry.sense] += 1
        dist_sum[entry.sense] = dist_sum.get(entry.sense, 0.0) + dist
    best = max(votes.values())
    tied = [s for s, c in votes.items() if c == best]
    return min(tied, key=lambda s: (dist_sum[s], s))


def classify(index: SenseIndex, key: WordKey, query: np.ndarray, k: int,
             backoff: Backoff = Backoff.NONE) -> Prediction:
    """Vote among the k' nearest same-key training instances.

    Unseen word keys abstain, or fall back to the corpus-global most
    frequent sense when backoff is GLOBAL_MFS.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if key not in index.buckets:
        if backoff is Backoff.GLOBAL_MFS:
            return Prediction(sense=index.global_mfs(), k_used=0,
                              neighbors=[], method=Method.MFS_BACKOFF)
        return Prediction(sense=None, k_used=0, neighbors=[],
                          method=Method.ABSTAIN)
    ranked = ranked_neighbors(index, key, query)
    k_prime = effective_k(index, key, k)
    vote_set = ranked[:k_prime]
    return Prediction(sense=_plurality(vote_set), k_used=k_prime,
                      neighbors=vote_set, method=Method.KNN)


def neighbors(index: SenseIndex, key: WordKey, query: np.ndarray,
              n: int) -> list[tuple[IndexEntry, float]]:
    """The min(n, bucket size) nearest entries with provenance."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return ranked_neighbors(index, key, query)[:n]


def mfs_predict(index: SenseIndex, key: WordKey) -> Prediction:
    """Most-frequent-sense baseline; global MFS for unseen keys."""
    if key in index.buckets:
        counts = index.sense_counts(key)
        best = max(counts.values())
        sense = min(s for s, c in counts.items() if c == best)
    else:
        sense = index.global_mfs()
    return Prediction(sense=sense, k_used=0, neighbors=[],
                      method=Method.MFS_BACKOFF)


def save_index(index: SenseIndex) -> bytes:
    """Serialize: magic, one JSON metadata line, then a CWE1 vector block."""
    buckets = []
    for (lemma, pos) in sorted(index.buckets,
                               key=lambda wk: (wk[0], wk[1] or "")):
        entries = [[str(e.provenance), e.sense]
                   for e in index.buckets[(lemma, pos)]]
        buckets.append({"lemma": lemma, "pos": pos, "entries": entries})
    meta = {"version": INDEX_VERSION, "keying": index.keying.value,
            "dim": index.dim, "buckets": buckets}
    store = VectorStore(dim=index.dim)
    for entries in index.buckets.values():
        for e in entries:
            store.add(str(e.provenance), e.vector)
    meta_line = json.dumps(meta, ensure_ascii=False,
                           separators=(",", ":")).encode("utf-8")
    return INDEX_MAGIC + meta_line + b"\n" + write_store(store)


def load_index(data: bytes) -> SenseIndex:
    if data[:8] != INDEX_MAGIC:
        raise ValueError("not a sense index file (bad magic)")
    nl = data.index(b"\n", 8)
    meta = json.loads(data[8:nl])
    if meta.get("version") != INDEX_VERSION:
        raise ValueError(f"unsupported index version {meta.get('version')}")
    store = read_store(data[nl + 1:])
    if store.dim != meta["dim"]:
        raise ValueError(f"vector block dim {store.dim} != "
                         f"metadata dim {meta['dim']}")
    index = SenseIndex(dim=meta["dim"], keying=Keying(meta["keying"]))
    for bucket in meta["buckets"]:
        wk = (bucket["lemma"], bucket["pos"])
        entries = []
        for prov, sense in bucket["entries"]:
            vec = store.lookup(prov)
            if vec is None:
                raise ValueError(f"index entry {prov!r} has no vector")
            entries.append(IndexEntry(vector=vec, sense=sense,
                                      provenance=InstanceKey.parse(prov)))
        index.buckets[wk] = entries
    return index
