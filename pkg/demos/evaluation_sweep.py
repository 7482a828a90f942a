"""Full evaluation workflow: index, k-sweep, MFS baseline, result table.

Draws two sense clusters per lemma from Gaussians in 50-D, evaluates a
held-out sample over a k grid and prints the rendered table with an MFS
baseline row.  With well-separated clusters the kNN rows sit at 100%
while MFS is stuck at the majority-sense rate.
"""
import numpy as np

from wsdknn import (TableFormat, VectorStore, build_index, evaluate_mfs,
                    render_table, sweep_k)
from wsdknn.corpus import Corpus, Sentence, Token

rng = np.random.default_rng(0)
DIM = 50
LEMMAS = ["bank", "watch"]


def sample(center, n):
    return center + rng.normal(size=(n, DIM))


def build_split(prefix, n_per_sense):
    sentences, store = [], VectorStore(dim=DIM)
    i = 0
    for li, lemma in enumerate(LEMMAS):
        for si in range(2):
            center = np.zeros(DIM)
            center[2 * li + si] = 8.0
            # skew: sense 0 gets 3x the data of sense 1
            n = n_per_sense * (3 if si == 0 else 1)
            for point in sample(center, n):
                sid = f"{prefix}{i}"
                i += 1
                sense = f"{lemma}%1:0{si + 1}:00::"
                sentences.append(
                    Sentence(sid, (Token(lemma, lemma, "NOUN", (sense,)),)))
                store.add(f"{sid}#0", point.astype(np.float32))
    return Corpus(prefix, tuple(sentences)), store


train, train_store = build_split("tr", 8)
test, test_store = build_split("te", 4)

index = build_index(train, train_store)
print(f"indexed {sum(len(b) for b in index.buckets.values())} instances "
      f"in {len(index.buckets)} buckets\n")

sweep = sweep_k(index, test, test_store, [1, 2, 3, 5, 10, 50])
sweep.mfs = evaluate_mfs(index, test)
print(render_table(sweep, TableFormat.MARKDOWN).decode())
