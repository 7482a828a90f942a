"""Binary vector store (CWE1 format) and the cosine distance primitive.

CWE1 layout, little-endian throughout:

  bytes 0-3   ASCII magic "CWE1"
  bytes 4-7   u32 dimension
  bytes 8-15  u64 record count n
  n records:  u16 key length L, L bytes UTF-8 key, dim x f32 components

Keys are canonical instance keys ("sentenceId#tokenIndex").  Writing
emits keys in lexicographic order so identical stores produce identical
bytes regardless of insertion order.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

MAGIC = b"CWE1"
_HEADER = struct.Struct("<4sIQ")
_KEYLEN = struct.Struct("<H")


class StoreFormatError(ValueError):
    """Raised when a byte stream is not a valid CWE1 store."""


@dataclass
class VectorStore:
    dim: int
    entries: dict[str, np.ndarray] = field(default_factory=dict)

    def add(self, key: str, vector: np.ndarray) -> None:
        vec = np.asarray(vector, dtype=np.float32)
        if vec.shape != (self.dim,):
            raise ValueError(f"vector for {key!r} has shape {vec.shape}, "
                             f"expected ({self.dim},)")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"vector for {key!r} has non-finite components")
        if key in self.entries:
            raise ValueError(f"duplicate key {key!r}")
        self.entries[key] = vec

    def lookup(self, key) -> Optional[np.ndarray]:
        """Stored vector for the key, or None when absent (never raises)."""
        return self.entries.get(str(key))

    def __len__(self) -> int:
        return len(self.entries)


def read_store(data: bytes) -> VectorStore:
    """Decode a CWE1 byte stream into a VectorStore."""
    if len(data) < _HEADER.size:
        raise StoreFormatError("truncated header")
    magic, dim, count = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise StoreFormatError(f"bad magic {magic!r}")
    if dim < 1:
        raise StoreFormatError(f"invalid dimension {dim}")
    store = VectorStore(dim=dim)
    offset = _HEADER.size
    rec_bytes = 4 * dim
    for i in range(count):
        if offset + _KEYLEN.size > len(data):
            raise StoreFormatError(f"truncated record {i}")
        (klen,) = _KEYLEN.unpack_from(data, offset)
        offset += _KEYLEN.size
        if offset + klen + rec_bytes > len(data):
            raise StoreFormatError(f"truncated record {i}")
        key = data[offset:offset + klen].decode("utf-8")
        offset += klen
        vec = np.frombuffer(data, dtype="<f4", count=dim, offset=offset).copy()
        offset += rec_bytes
        if key in store.entries:
            raise StoreFormatError(f"duplicate key {key!r}")
        if not np.all(np.isfinite(vec)):
            raise StoreFormatError(f"non-finite components for key {key!r}")
        store.entries[key] = vec
    if offset != len(data):
        raise StoreFormatError(f"{len(data) - offset} trailing bytes")
    return store


def write_store(store: VectorStore) -> bytes:
    """Encode a VectorStore as CWE1 bytes (keys in lexicographic order)."""
    parts = [_HEADER.pack(MAGIC, store.dim, len(store.entries))]
    for key in sorted(store.entries):
        kb = key.encode("utf-8")
        if len(kb) > 0xFFFF:
            raise ValueError(f"key too long ({len(kb)} bytes)")
        parts.append(_KEYLEN.pack(len(kb)))
        parts.append(kb)
        parts.append(np.asarray(store.entries[key], dtype="<f4").tobytes())
    return b"".join(parts)


def load_store(path) -> VectorStore:
    with open(path, "rb") as fh:
        return read_store(fh.read())


def save_store(store: VectorStore, path) -> None:
    with open(path, "wb") as fh:
        fh.write(write_store(store))


def cosine_distance(u: np.ndarray, v: np.ndarray) -> float:
    """1 - cos(u, v), accumulated in float64; range [0, 2].

    Raises ValueError on length mismatch or a zero-norm operand.
    """
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.sqrt(np.dot(a, a))
    nb = np.sqrt(np.dot(b, b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine distance undefined for zero vector")
    d = 1.0 - np.dot(a, b) / (na * nb)
    return float(min(max(d, 0.0), 2.0))
