import numpy as np
import pytest

from wsdknn.corpus import Corpus, Keying, Sentence, Token, annotated_instances
from wsdknn.sense_index import SenseIndex, build_index
from wsdknn.vectors import VectorStore

# 3 sentences / 7 words / 2 annotations; hand counts used across tests
FIXTURE_XML = b"""<?xml version="1.0" encoding="UTF-8"?>
<corpus>
  <sentence id="s1">
    <word surface_form="The" lemma="the" pos="DT"/>
    <word surface_form="banks" lemma="bank" pos="NOUN" wn30_key="bank%1:17:01::"/>
    <word surface_form="collapsed" lemma="collapse" pos="VERB"/>
  </sentence>
  <sentence id="s2">
    <word surface_form="She" lemma="she" pos="PRP"/>
    <word surface_form="dances" lemma="dance" pos="VERB" wn30_key="dance%2:38:00::"/>
  </sentence>
  <sentence id="s3">
    <word surface_form="A" lemma="a" pos="DT"/>
    <word surface_form="river" lemma="river" pos="NOUN"/>
  </sentence>
</corpus>
"""


def make_token(lemma, sense=None, pos="NOUN", surface=None):
    senses = (sense,) if sense else ()
    return Token(surface=surface or lemma, lemma=lemma, pos=pos, senses=senses)


def make_corpus(sentence_specs, name="fixture"):
    """sentence_specs: list of (sentence_id, [Token, ...])."""
    sentences = tuple(Sentence(id=sid, tokens=tuple(toks))
                      for sid, toks in sentence_specs)
    return Corpus(name=name, sentences=sentences)


def store_for(corpus, dim, rng=None):
    """A store with a random unit-ish vector per annotated instance."""
    rng = rng or np.random.default_rng(0)
    store = VectorStore(dim=dim)
    for key, _, _, _ in annotated_instances(corpus):
        store.add(str(key), rng.normal(size=dim).astype(np.float32))
    return store


def entries_equal(a, b):
    return (a.sense == b.sense and a.provenance == b.provenance
            and np.array_equal(a.vector, b.vector))


def index_equal(x: SenseIndex, y: SenseIndex) -> bool:
    if x.dim != y.dim or x.keying != y.keying:
        return False
    if set(x.buckets) != set(y.buckets):
        return False
    for wk, entries in x.buckets.items():
        other = y.buckets[wk]
        if len(entries) != len(other):
            return False
        if not all(entries_equal(e, o) for e, o in zip(entries, other)):
            return False
    return True


@pytest.fixture
def two_sense_corpus():
    """One lemma, two senses, 2+2 instances; clustered 2-D geometry."""
    corpus = make_corpus([
        ("t1", [make_token("bank", "bank%1:17:01::")]),
        ("t2", [make_token("bank", "bank%1:17:01::")]),
        ("t3", [make_token("bank", "bank%1:14:00::")]),
        ("t4", [make_token("bank", "bank%1:14:00::")]),
    ])
    store = VectorStore(dim=2)
    store.add("t1#0", np.array([1.0, 0.05], dtype=np.float32))
    store.add("t2#0", np.array([1.0, -0.05], dtype=np.float32))
    store.add("t3#0", np.array([0.05, 1.0], dtype=np.float32))
    store.add("t4#0", np.array([-0.05, 1.0], dtype=np.float32))
    return corpus, store


@pytest.fixture
def two_sense_index(two_sense_corpus):
    corpus, store = two_sense_corpus
    return build_index(corpus, store, Keying.LEMMA)
