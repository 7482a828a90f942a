"""Localized kNN classification and the class-balanced k' vote.

Constructs a skewed training bucket for one lemma (50 instances of a
majority sense, 2 of a minority sense) and shows how the k' = min(k,
c_min) rule rescues the minority sense that plain majority voting would
drown out.  Also prints the neighbor provenance a prediction is built
from.
"""
import math

import numpy as np

from wsdknn import VectorStore, build_index, classify, effective_k, neighbors
from wsdknn.corpus import Corpus, Sentence, Token

# points on the unit circle: angle stands in for "context similarity"
def vec(theta):
    return np.array([math.cos(theta), math.sin(theta)], dtype=np.float32)

sentences = []
store = VectorStore(dim=2)
# majority sense A: 50 contexts far from the query
for i in range(50):
    sid = f"a{i}"
    sentences.append(Sentence(sid, (Token("bank", "bank", "NOUN",
                                          ("bank%1:17:01::",)),)))
    store.add(f"{sid}#0", vec(1.2 + 0.001 * i))
# minority sense B: 2 contexts near the query
for i in range(2):
    sid = f"b{i}"
    sentences.append(Sentence(sid, (Token("bank", "bank", "NOUN",
                                          ("bank%1:14:00::",)),)))
    store.add(f"{sid}#0", vec(0.1 + 0.01 * i))

train = Corpus("demo", tuple(sentences))
index = build_index(train, store)
key = ("bank", None)
query = vec(0.0)

print(f"bucket sense counts: {dict(index.sense_counts(key))}")
print(f"effective k for k=10: k' = {effective_k(index, key, 10)}")

pred = classify(index, key, query, k=10)
print(f"\nk=10 prediction: {pred.sense} (vote set size {pred.k_used})")

plain = {}
for entry, _ in neighbors(index, key, query, 10):
    plain[entry.sense] = plain.get(entry.sense, 0) + 1
winner = max(plain, key=plain.get)
print(f"an uncapped 10-vote would have predicted: {winner} (votes {plain})")

print("\nneighbor provenance for the prediction:")
for entry, dist in pred.neighbors:
    sentence = train.sentence(entry.provenance.sentence_id)
    print(f"  {entry.provenance}  d={dist:.4f}  {entry.sense}  "
          f"\"{sentence.text}\"")
