"""Embedding container, binary file format and the cosine comparator.

File layout (all little endian):

    bytes 0-7   magic "OODEMB01"
    u32         record count
    u32         vector dimension
    per record  u16 id byte length, id UTF-8 bytes, dim float32 values
"""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CorruptFileError, DegenerateEmbeddingError, FormatError

MAGIC = b"OODEMB01"


@dataclass
class EmbeddingSet:
    dim: int
    records: dict[str, np.ndarray]

    def __contains__(self, key: str) -> bool:
        return key in self.records

    def __len__(self) -> int:
        return len(self.records)


def write_embeddings(records: dict[str, np.ndarray], dim: int) -> bytes:
    out = bytearray()
    out += MAGIC
    out += struct.pack("<II", len(records), dim)
    for name, vec in records.items():
        vec = np.asarray(vec, dtype=np.float32)
        if vec.shape != (dim,):
            raise FormatError(f"vector for {name!r} has shape {vec.shape}, expected ({dim},)")
        ident = name.encode("utf-8")
        if len(ident) > 0xFFFF:
            raise FormatError(f"id too long: {name!r}")
        out += struct.pack("<H", len(ident))
        out += ident
        out += vec.tobytes()
    return bytes(out)


def save_embeddings(path, records: dict[str, np.ndarray], dim: int) -> None:
    Path(path).write_bytes(write_embeddings(records, dim))


def parse_embeddings(data: bytes) -> EmbeddingSet:
    if data[:8] != MAGIC:
        raise FormatError("bad embedding file magic")
    if len(data) < 16:
        raise CorruptFileError("embedding file truncated before header")
    count, dim = struct.unpack_from("<II", data, 8)
    pos = 16
    records: dict[str, np.ndarray] = {}
    for _ in range(count):
        if pos + 2 > len(data):
            raise CorruptFileError("embedding record truncated")
        (id_len,) = struct.unpack_from("<H", data, pos)
        pos += 2
        end = pos + id_len + 4 * dim
        if end > len(data):
            raise CorruptFileError("embedding record truncated")
        name = data[pos : pos + id_len].decode("utf-8")
        pos += id_len
        vec = np.frombuffer(data, dtype="<f4", count=dim, offset=pos).astype(np.float64)
        pos += 4 * dim
        if name in records:
            raise FormatError(f"duplicate embedding id {name!r}")
        if not np.all(np.isfinite(vec)):
            raise CorruptFileError(f"non-finite components in embedding {name!r}")
        records[name] = vec
    if pos != len(data):
        raise CorruptFileError("trailing bytes after last embedding record")
    return EmbeddingSet(dim=dim, records=records)


def load_embeddings(path) -> EmbeddingSet:
    return parse_embeddings(Path(path).read_bytes())


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DegenerateEmbeddingError("vectors must have equal dimension")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise DegenerateEmbeddingError("zero-norm embedding")
    return float(np.dot(u, v) / (nu * nv))
