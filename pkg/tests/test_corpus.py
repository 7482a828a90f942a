import json

import pytest
from hypothesis import given, strategies as st

from wsdknn.corpus import (AnnotationError, Keying, ParseError,
                           annotated_instances, coarse_pos, compute_stats,
                           parse_jsonl, parse_ufsac_xml, write_jsonl)
from conftest import FIXTURE_XML, make_corpus, make_token


class TestUfsacXml:
    def test_annotated_word(self):
        corpus = parse_ufsac_xml(
            b'<corpus><sentence id="s1">'
            b'<word surface_form="banks" lemma="bank" pos="NOUN" '
            b'wn30_key="bank%1:17:01::"/>'
            b'</sentence></corpus>')
        tok = corpus.sentences[0].tokens[0]
        assert tok.surface == "banks"
        assert tok.lemma == "bank"
        assert tok.pos == "NOUN"
        assert tok.sense == "bank%1:17:01::"

    def test_empty_document(self):
        assert parse_ufsac_xml(b"<corpus/>").sentences == ()

    def test_fixture_counts(self):
        corpus = parse_ufsac_xml(FIXTURE_XML)
        stats = compute_stats(corpus)
        assert stats.n_sentences == 3
        assert stats.n_instances == 2
        assert sum(len(s.tokens) for s in corpus.sentences) == 7

    def test_malformed_xml_reports_offset(self):
        with pytest.raises(ParseError, match="byte offset"):
            parse_ufsac_xml(b"<corpus><sentence></corpus>")

    def test_sense_without_lemma(self):
        with pytest.raises(AnnotationError, match="s1"):
            parse_ufsac_xml(
                b'<corpus><sentence id="s1">'
                b'<word surface_form="banks" wn30_key="bank%1:17:01::"/>'
                b'</sentence></corpus>')

    def test_semicolon_keys_first_is_primary(self):
        corpus = parse_ufsac_xml(
            b'<corpus><sentence id="s1">'
            b'<word surface_form="w" lemma="w" '
            b'wn30_key="w%1:01:00::;w%1:02:00::"/>'
            b'</sentence></corpus>')
        tok = corpus.sentences[0].tokens[0]
        assert tok.sense == "w%1:01:00::"
        assert tok.senses == ("w%1:01:00::", "w%1:02:00::")

    def test_lemma_lowercased(self):
        corpus = parse_ufsac_xml(
            b'<corpus><sentence id="s1">'
            b'<word surface_form="Bank" lemma="Bank" pos="NN"/>'
            b'</sentence></corpus>')
        assert corpus.sentences[0].tokens[0].lemma == "bank"

    def test_pos_coarsening(self):
        assert coarse_pos("NN") == "NOUN"
        assert coarse_pos("VBZ") == "VERB"
        assert coarse_pos("JJ") == "ADJ"
        assert coarse_pos("RB") == "ADV"
        assert coarse_pos("DT") == "OTHER"
        assert coarse_pos(None) is None


class TestJsonl:
    def test_minimal(self):
        corpus = parse_jsonl(
            b'{"id":"s1","tokens":[{"s":"Bank","l":"bank","p":"NOUN",'
            b'"k":"bank%1:14:00::"}]}\n')
        assert len(corpus.sentences) == 1
        assert len(annotated_instances(corpus)) == 1

    def test_token_without_key(self):
        corpus = parse_jsonl(b'{"id":"s1","tokens":[{"s":"a","l":"a"}]}\n')
        assert corpus.sentences[0].tokens[0].sense is None

    def test_duplicate_id_rejected(self):
        line = b'{"id":"s1","tokens":[{"s":"a","l":"a"}]}\n'
        with pytest.raises(ParseError, match="duplicate"):
            parse_jsonl(line + line)

    def test_key_without_lemma_rejected(self):
        with pytest.raises(AnnotationError):
            parse_jsonl(b'{"id":"s1","tokens":[{"s":"a","k":"a%1:01:00::"}]}\n')

    def test_empty_corpus_writes_empty(self):
        assert write_jsonl(make_corpus([])) == b""

    def test_single_sentence_single_line(self):
        data = write_jsonl(make_corpus([("s1", [make_token("a")])]))
        assert data.endswith(b"\n")
        assert data.count(b"\n") == 1

    def test_write_is_deterministic(self):
        corpus = parse_ufsac_xml(FIXTURE_XML)
        assert write_jsonl(corpus) == write_jsonl(corpus)

    def test_roundtrip_fixture(self):
        corpus = parse_ufsac_xml(FIXTURE_XML)
        assert parse_jsonl(write_jsonl(corpus)) == Corpus_noname(corpus)


def Corpus_noname(corpus):
    # round-trips compare content; the name field comes from the file path
    from wsdknn.corpus import Corpus
    return Corpus(name="", sentences=corpus.sentences)


_lemmas = st.sampled_from(["bank", "dance", "watch", "sentence", "balloon"])
_pos = st.sampled_from([None, "NOUN", "VERB", "ADJ", "ADV", "OTHER"])


@st.composite
def corpora(draw):
    n_sent = draw(st.integers(1, 6))
    sentences = []
    for i in range(n_sent):
        n_tok = draw(st.integers(1, 5))
        toks = []
        for _ in range(n_tok):
            lemma = draw(_lemmas)
            annotated = draw(st.booleans())
            sense = f"{lemma}%1:0{draw(st.integers(1, 3))}:00::" if annotated else None
            toks.append(make_token(lemma, sense, pos=draw(_pos)))
        sentences.append((f"s{i}", toks))
    return make_corpus(sentence_specs=sentences, name="")


class TestProperties:
    @given(corpora())
    def test_jsonl_roundtrip(self, corpus):
        assert parse_jsonl(write_jsonl(corpus)) == corpus

    @given(corpora())
    def test_stats_identities(self, corpus):
        for keying in Keying:
            s = compute_stats(corpus, keying)
            if s.n_distinct_words:
                assert s.avg_senses_per_word * s.n_distinct_words == pytest.approx(s.n_senses)
                assert s.avg_instances_per_word_sense * s.n_senses == pytest.approx(s.n_instances)
            assert len(annotated_instances(corpus)) == s.n_instances

    @given(corpora())
    def test_lemma_pos_never_fewer_words(self, corpus):
        a = compute_stats(corpus, Keying.LEMMA)
        b = compute_stats(corpus, Keying.LEMMA_POS)
        assert b.n_distinct_words >= a.n_distinct_words

    @given(corpora())
    def test_pos_distribution_sums_to_100(self, corpus):
        s = compute_stats(corpus, Keying.LEMMA)
        if s.n_instances:
            assert sum(s.pos_distribution.values()) == pytest.approx(100.0, abs=0.01)


class TestStats:
    def test_hand_counted_fixture(self):
        # lemma "bank": senses A (2 instances), B (1); lemma "dance": C (2)
        corpus = make_corpus([
            ("s0", [make_token("bank", "bank%1:17:01::"),
                    make_token("dance", "dance%2:38:00::", pos="VERB")]),
            ("s1", [make_token("bank", "bank%1:17:01::")]),
            ("s2", [make_token("bank", "bank%1:14:00::")]),
            ("s3", [make_token("dance", "dance%2:38:00::", pos="VERB")]),
            ("s4", [make_token("river")]),
        ])
        s = compute_stats(corpus)
        assert s.n_sentences == 5
        assert s.n_instances == 5
        assert s.n_distinct_words == 2
        assert s.n_senses == 3
        assert s.avg_senses_per_word == pytest.approx(1.5)
        assert s.avg_instances_per_word_sense == pytest.approx(5 / 3)
        # bank: min(2, 1) = 1; dance: 2 -> avg 1.5
        assert s.avg_k_prime == pytest.approx(1.5)
        assert s.pos_distribution["NOUN"] == pytest.approx(100 * 2 / 3)
        assert s.pos_distribution["VERB"] == pytest.approx(100 / 3)

    def test_empty_corpus_zeros(self):
        s = compute_stats(make_corpus([("s0", [make_token("a")])]))
        assert s.n_instances == 0
        assert s.avg_senses_per_word == 0.0
        assert s.avg_k_prime == 0.0

    def test_single_sense_single_instance(self):
        corpus = make_corpus([("s0", [make_token("a", "a%1:01:00::")]),
                              ("s1", [make_token("b", "b%1:01:00::")])])
        s = compute_stats(corpus)
        assert s.avg_senses_per_word == 1.0
        assert s.avg_k_prime == 1.0

    def test_annotated_instances_positions(self):
        corpus = make_corpus([
            ("s1", [make_token("bank", "bank%1:17:01::"), make_token("x"),
                    make_token("y"), make_token("dance", "dance%2:38:00::")]),
        ])
        keys = [str(k) for k, _, _, _ in annotated_instances(corpus)]
        assert keys == ["s1#0", "s1#3"]

    def test_no_annotations_empty(self):
        corpus = make_corpus([("s1", [make_token("a")])])
        assert annotated_instances(corpus) == []
