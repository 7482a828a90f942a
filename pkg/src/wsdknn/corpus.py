"""Sense-annotated corpus model, parsers, and dataset statistics.

Corpora arrive pre-lemmatized and POS-tagged.  Two on-disk formats are
supported: a subset of the UFSAC XML schema (read-only) and a JSONL
interchange format (read/write, deterministic output).
"""
from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional


class CorpusError(ValueError):
    """Base class for corpus parsing/validation failures."""


class ParseError(CorpusError):
    """Structurally invalid input (bad XML, bad JSON, duplicate ids)."""


class AnnotationError(CorpusError):
    """A sense annotation that violates the data model."""


POS_TAGS = ("NOUN", "VERB", "ADJ", "ADV", "OTHER")

# Coarse mapping accepts both UFSAC-style tags and Penn-style prefixes.
_POS_PREFIXES = {
    "NOUN": "NOUN", "N": "NOUN",
    "VERB": "VERB", "V": "VERB",
    "ADJ": "ADJ", "J": "ADJ", "A": "ADJ",
    "ADV": "ADV", "R": "ADV",
}


def coarse_pos(tag: Optional[str]) -> Optional[str]:
    """Map a raw POS tag to the coarse set NOUN/VERB/ADJ/ADV/OTHER."""
    if tag is None or tag == "":
        return None
    t = tag.upper()
    if t in _POS_PREFIXES:
        return _POS_PREFIXES[t]
    for prefix in ("NOUN", "VERB", "ADJ", "ADV"):
        if t.startswith(prefix):
            return prefix
    if t[0] in ("N", "V", "J", "R") and t.isalpha():
        return _POS_PREFIXES.get(t[0], "OTHER")
    return "OTHER"


class Keying(str, Enum):
    """How words are keyed in indexes and statistics."""

    LEMMA = "lemma"
    LEMMA_POS = "lemma+pos"


def normalize_sense_key(raw: str) -> str:
    """Validate a WordNet-style sense key and lowercase its lemma part."""
    if not raw:
        raise AnnotationError("empty sense key")
    if raw.count("%") != 1:
        raise AnnotationError(f"sense key {raw!r} must contain exactly one '%'")
    lemma_part, lex_part = raw.split("%")
    return f"{lemma_part.lower()}%{lex_part}"


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: Optional[str] = None
    senses: tuple[str, ...] = ()

    @property
    def sense(self) -> Optional[str]:
        """First (primary) sense key, used for training; None if unannotated."""
        return self.senses[0] if self.senses else None


@dataclass(frozen=True)
class Sentence:
    id: str
    tokens: tuple[Token, ...]

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)


@dataclass(frozen=True)
class Corpus:
    name: str
    sentences: tuple[Sentence, ...]

    def sentence(self, sentence_id: str) -> Sentence:
        for s in self.sentences:
            if s.id == sentence_id:
                return s
        raise KeyError(sentence_id)


@dataclass(frozen=True, order=True)
class InstanceKey:
    """Position of one annotated token: canonical form "sentence_id#index"."""

    sentence_id: str
    token_index: int

    def __str__(self) -> str:
        return f"{self.sentence_id}#{self.token_index}"

    @classmethod
    def parse(cls, text: str) -> "InstanceKey":
        sid, _, idx = text.rpartition("#")
        if not sid or not idx.isdigit():
            raise ValueError(f"invalid instance key {text!r}")
        return cls(sid, int(idx))


@dataclass
class CorpusStats:
    n_sentences: int
    n_instances: int
    n_distinct_words: int
    n_senses: int
    avg_senses_per_word: float
    avg_instances_per_word_sense: float
    avg_k_prime: float
    pos_distribution: dict[str, float] = field(default_factory=dict)


def _make_token(surface: str, lemma: str, pos: Optional[str],
                raw_keys: Optional[str], context: str) -> Token:
    if not surface:
        raise AnnotationError(f"{context}: empty surface form")
    senses: tuple[str, ...] = ()
    if raw_keys:
        if not lemma:
            raise AnnotationError(f"{context}: annotated token has no lemma")
        senses = tuple(normalize_sense_key(k) for k in raw_keys.split(";") if k)
    if not lemma:
        lemma = surface
    return Token(surface=surface, lemma=lemma.lower(),
                 pos=coarse_pos(pos), senses=senses)


def parse_ufsac_xml(data: bytes, name: str = "") -> Corpus:
    """Parse a UFSAC-subset XML document into a Corpus.

    Only sentence/word elements and the attributes surface_form, lemma,
    pos and wn30_key are honored; everything else is ignored.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        offset = sum(len(ln) + 1 for ln in data.split(b"\n")[: line - 1]) + col
        raise ParseError(f"malformed XML at byte offset {offset}: {exc}") from exc

    sentences: list[Sentence] = []
    seen_ids: set[str] = set()
    for i, sent in enumerate(root.iter("sentence")):
        sid = sent.get("id") or f"s{i}"
        if sid in seen_ids:
            raise ParseError(f"duplicate sentence id {sid!r}")
        seen_ids.add(sid)
        tokens = [
            _make_token(
                word.get("surface_form", ""),
                word.get("lemma", ""),
                word.get("pos"),
                word.get("wn30_key"),
                f"sentence {sid!r}",
            )
            for word in sent.iter("word")
        ]
        if not tokens:
            continue
        sentences.append(Sentence(id=sid, tokens=tuple(tokens)))
    return Corpus(name=name, sentences=tuple(sentences))


def parse_jsonl(data: bytes, name: str = "") -> Corpus:
    """Parse the JSONL interchange format (one sentence object per line)."""
    sentences: list[Sentence] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(data.split(b"\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {lineno}: invalid JSON: {exc}") from exc
        sid = obj.get("id")
        if not sid or not isinstance(sid, str):
            raise ParseError(f"line {lineno}: missing sentence id")
        if sid in seen_ids:
            raise ParseError(f"line {lineno}: duplicate sentence id {sid!r}")
        seen_ids.add(sid)
        tokens = []
        for tok in obj.get("tokens", []):
            tokens.append(
                _make_token(tok.get("s", ""), tok.get("l", ""), tok.get("p"),
                            tok.get("k"), f"sentence {sid!r}")
            )
        if not tokens:
            raise ParseError(f"line {lineno}: sentence {sid!r} has no tokens")
        sentences.append(Sentence(id=sid, tokens=tuple(tokens)))
    return Corpus(name=name, sentences=tuple(sentences))


def write_jsonl(corpus: Corpus) -> bytes:
    """Serialize a Corpus to JSONL, deterministically (fixed field order)."""
    lines = []
    for sent in corpus.sentences:
        toks = []
        for t in sent.tokens:
            obj: dict = {"s": t.surface, "l": t.lemma}
            if t.pos is not None:
                obj["p"] = t.pos
            if t.senses:
                obj["k"] = ";".join(t.senses)
            toks.append(obj)
        lines.append(json.dumps({"id": sent.id, "tokens": toks},
                                ensure_ascii=False, separators=(",", ":")))
    return ("".join(line + "\n" for line in lines)).encode("utf-8")


def load_corpus(path, fmt: Optional[str] = None) -> Corpus:
    """Read a corpus file, auto-detecting the format from the extension."""
    import pathlib

    p = pathlib.Path(path)
    data = p.read_bytes()
    if fmt is None:
        fmt = "xml" if p.suffix.lower() == ".xml" else "jsonl"
    if fmt == "xml":
        return parse_ufsac_xml(data, name=p.stem)
    if fmt == "jsonl":
        return parse_jsonl(data, name=p.stem)
    raise ValueError(f"unknown corpus format {fmt!r}")


def annotated_instances(corpus: Corpus) -> list[tuple[InstanceKey, str, Optional[str], str]]:
    """All annotated tokens in corpus order as (key, lemma, pos, first sense)."""
    out = []
    for sent in corpus.sentences:
        for i, tok in enumerate(sent.tokens):
            if tok.senses:
                out.append((InstanceKey(sent.id, i), tok.lemma, tok.pos, tok.senses[0]))
    return out


def word_key(lemma: str, pos: Optional[str], keying: Keying):
    return (lemma, pos if keying is Keying.LEMMA_POS else None)


def compute_stats(corpus: Corpus, keying: Keying = Keying.LEMMA) -> CorpusStats:
    """Dataset statistics: sizes, sense inventory averages, avg k' and the
    POS distribution over distinct senses.

    avg k' is the large-k limit of the class-balanced vote size: for each
    distinct word key, take the smallest instance count among its observed
    senses, then average over word keys.
    """
    instances = annotated_instances(corpus)
    sense_counts: dict[tuple, Counter] = {}
    sense_pos: dict[tuple[tuple, str], Counter] = {}
    for _, lemma, pos, sense in instances:
        wk = word_key(lemma, pos, keying)
        sense_counts.setdefault(wk, Counter())[sense] += 1
        sense_pos.setdefault((wk, sense), Counter())[pos or "OTHER"] += 1

    n_sentences = len(corpus.sentences)
    n_instances = len(instances)
    n_words = len(sense_counts)
    n_senses = sum(len(c) for c in sense_counts.values())

    if n_instances == 0:
        return CorpusStats(n_sentences, 0, 0, 0, 0.0, 0.0, 0.0,
                           {p: 0.0 for p in POS_TAGS})

    avg_senses = n_senses / n_words
    avg_inst = n_instances / n_senses
    avg_k_prime = sum(min(c.values()) for c in sense_counts.values()) / n_words

    pos_of_sense = Counter()
    for key, tags in sense_pos.items():
        # majority POS among the sense's instances; ties by first observed
        best = max(tags.items(), key=lambda kv: kv[1])[0]
        pos_of_sense[best] += 1
    pos_dist = {p: 100.0 * pos_of_sense.get(p, 0) / n_senses for p in POS_TAGS}

    return CorpusStats(n_sentences, n_instances, n_words, n_senses,
                       avg_senses, avg_inst, avg_k_prime, pos_dist)
