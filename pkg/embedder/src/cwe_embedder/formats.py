"""Corpus reading and CWE1 writing.

The embedder talks to the disambiguation tooling purely through files:
it reads the JSONL/XML corpus formats and writes the CWE1 binary vector
store (little-endian: 4-byte magic "CWE1", u32 dim, u64 count, then per
record u16 key length, UTF-8 key, dim x f32).
"""
from __future__ import annotations

import json
import struct
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

CWE1_MAGIC = b"CWE1"
_HEADER = struct.Struct("<4sIQ")
_KEYLEN = struct.Struct("<H")


@dataclass(frozen=True)
class CorpusToken:
    surface: str
    lemma: str
    annotated: bool


@dataclass(frozen=True)
class CorpusSentence:
    id: str
    tokens: tuple[CorpusToken, ...]


def _token(surface: str, lemma: str, annotated: bool) -> CorpusToken:
    return CorpusToken(surface=surface or lemma,
                       lemma=(lemma or surface).lower(),
                       annotated=annotated)


def read_corpus(path) -> list[CorpusSentence]:
    p = Path(path)
    data = p.read_bytes()
    if p.suffix.lower() == ".xml":
        return _read_xml(data)
    return _read_jsonl(data)


def _read_xml(data: bytes) -> list[CorpusSentence]:
    root = ET.fromstring(data)
    sentences = []
    for i, sent in enumerate(root.iter("sentence")):
        sid = sent.get("id") or f"s{i}"
        tokens = tuple(
            _token(w.get("surface_form", ""), w.get("lemma", ""),
                   bool(w.get("wn30_key")))
            for w in sent.iter("word"))
        if tokens:
            sentences.append(CorpusSentence(id=sid, tokens=tokens))
    return sentences


def _read_jsonl(data: bytes) -> list[CorpusSentence]:
    sentences = []
    for line in data.split(b"\n"):
        if not line.strip():
            continue
        obj = json.loads(line)
        tokens = tuple(
            _token(t.get("s", ""), t.get("l", ""), "k" in t)
            for t in obj["tokens"])
        sentences.append(CorpusSentence(id=obj["id"], tokens=tokens))
    return sentences


class StoreWriter:
    """Collects keyed vectors and emits a deterministic CWE1 file."""

    def __init__(self, dim: int):
        self.dim = dim
        self._entries: dict[str, np.ndarray] = {}

    def add(self, key: str, vector: np.ndarray) -> None:
        vec = np.asarray(vector, dtype=np.float32)
        if vec.shape != (self.dim,):
            raise ValueError(f"vector for {key!r} has shape {vec.shape}, "
                             f"expected ({self.dim},)")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"non-finite vector for {key!r}")
        if key in self._entries:
            raise ValueError(f"duplicate key {key!r}")
        self._entries[key] = vec

    def __len__(self) -> int:
        return len(self._entries)

    def to_bytes(self) -> bytes:
        parts = [_HEADER.pack(CWE1_MAGIC, self.dim, len(self._entries))]
        for key in sorted(self._entries):
            kb = key.encode("utf-8")
            if len(kb) > 0xFFFF:
                raise ValueError(f"key too long: {key!r}")
            parts.append(_KEYLEN.pack(len(kb)))
            parts.append(kb)
            parts.append(self._entries[key].astype("<f4").tobytes())
        return b"".join(parts)

    def write(self, path) -> None:
        Path(path).write_bytes(self.to_bytes())
