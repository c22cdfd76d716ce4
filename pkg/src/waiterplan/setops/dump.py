"""
Versioned binary dump of named polynomial zonotopes ("WPZ1").

Layout, all little-endian:

    magic        4 bytes  b"WPZ1"
    count        uint32
    per entry:
      name       uint16 length + UTF-8 bytes
      shape      uint8 ndim + ndim * uint32
      ids        uint32 n_ids + n_ids * (uint8 tag, int32 scope, int32 index)
      terms      uint32 n_terms
      exponents  n_terms * n_ids int32, row-major
      coeffs     n_terms * prod(shape) float64, row-major
"""

import struct
from pathlib import Path
from typing import Dict, Mapping

import numpy as np

from ..errors import ScenarioError
from .indeterminates import IndeterminateId, IndeterminateTag
from .polyzono import PolyZonotope

MAGIC = b"WPZ1"

_ID = struct.Struct("<Bii")


def encode_dump(entries: Mapping[str, PolyZonotope]) -> bytes:
    """Serialize named polynomial zonotopes in entry order."""
    chunks = [MAGIC, struct.pack("<I", len(entries))]
    for name, p in entries.items():
        raw_name = name.encode("utf-8")
        chunks.append(struct.pack("<H", len(raw_name)) + raw_name)
        chunks.append(struct.pack("<B", len(p.shape)) + struct.pack(f"<{len(p.shape)}I", *p.shape))
        chunks.append(struct.pack("<I", len(p.ids)))
        chunks.extend(_ID.pack(int(i.tag), i.scope, i.index) for i in p.ids)
        chunks.append(struct.pack("<I", p.coeffs.shape[0]))
        chunks.append(np.ascontiguousarray(p.expmat, dtype="<i4").tobytes())
        chunks.append(np.ascontiguousarray(p.coeffs, dtype="<f8").tobytes())
    return b"".join(chunks)


class _Reader:
    def __init__(self, data: bytes, path: Path):
        self.data = data
        self.offset = 0
        self.path = path

    def take(self, n: int) -> bytes:
        if self.offset + n > len(self.data):
            raise ScenarioError("truncated WPZ1 dump", self.path)
        chunk = self.data[self.offset:self.offset + n]
        self.offset += n
        return chunk

    def unpack(self, fmt: str):
        size = struct.calcsize(fmt)
        return struct.unpack(fmt, self.take(size))


def decode_dump(data: bytes, path: Path = None) -> Dict[str, PolyZonotope]:
    """
    Parse a WPZ1 dump.

    Raises:
        ScenarioError: If the magic is wrong or the data is truncated.
    """
    reader = _Reader(data, path)
    if reader.take(4) != MAGIC:
        raise ScenarioError("not a WPZ1 dump", path)
    (count,) = reader.unpack("<I")
    entries: Dict[str, PolyZonotope] = {}
    for _ in range(count):
        (name_len,) = reader.unpack("<H")
        name = reader.take(name_len).decode("utf-8")
        (ndim,) = reader.unpack("<B")
        shape = reader.unpack(f"<{ndim}I") if ndim else ()
        (n_ids,) = reader.unpack("<I")
        ids = []
        for _ in range(n_ids):
            tag, scope, index = reader.unpack("<Bii")
            ids.append(IndeterminateId(IndeterminateTag(tag), scope, index))
        (n_terms,) = reader.unpack("<I")
        expmat = np.frombuffer(reader.take(4 * n_terms * n_ids), dtype="<i4").astype(np.int64)
        size = int(np.prod(shape)) if shape else 1
        coeffs = np.frombuffer(reader.take(8 * n_terms * size), dtype="<f8").astype(float)
        entries[name] = PolyZonotope._from_parts(
            coeffs.reshape((n_terms,) + tuple(shape)), expmat.reshape(n_terms, n_ids), tuple(ids)
        )
    return entries


def save_dump(path: Path, entries: Mapping[str, PolyZonotope]) -> None:
    Path(path).write_bytes(encode_dump(entries))


def load_dump(path: Path) -> Dict[str, PolyZonotope]:
    path = Path(path)
    return decode_dump(path.read_bytes(), path)
