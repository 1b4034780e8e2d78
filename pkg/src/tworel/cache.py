"""On-disk memo of reduced subproblems, keyed by canonical graph key.

File layout: an 8-byte magic, a little-endian uint32 version, then records

    u32 key length, key bytes, u32 coefficient count,
    per coefficient: u32 length, ascii "num/den"

Records are appended as they are set, so a crashed run keeps what it wrote.
"""

from __future__ import annotations

import logging
import os
import struct
import weakref
from collections.abc import Iterator, MutableMapping
from fractions import Fraction

from .polynomial import Polynomial

__all__ = ["DiskCache", "CacheFormatError"]

log = logging.getLogger(__name__)

MAGIC = b"TRELMEMO"
VERSION = 1
_U32 = struct.Struct("<I")


class CacheFormatError(ValueError):
    pass


def _pack(key: bytes, f: Polynomial) -> bytes:
    parts = [_U32.pack(len(key)), key, _U32.pack(len(f.coeffs))]
    for c in f.coeffs:
        s = f"{c.numerator}/{c.denominator}".encode()
        parts += [_U32.pack(len(s)), s]
    return b"".join(parts)


def _unpack(buf: bytes) -> Iterator[tuple[bytes, Polynomial]]:
    pos = 0

    def take(n: int) -> bytes:
        nonlocal pos
        if pos + n > len(buf):
            raise CacheFormatError("truncated record")
        out = buf[pos : pos + n]
        pos += n
        return out

    while pos < len(buf):
        (klen,) = _U32.unpack(take(4))
        key = take(klen)
        (n,) = _U32.unpack(take(4))
        coeffs = []
        for _ in range(n):
            (clen,) = _U32.unpack(take(4))
            coeffs.append(Fraction(take(clen).decode()))
        yield key, Polynomial(coeffs)


class DiskCache(MutableMapping):
    """Mapping ``bytes -> Polynomial`` backed by ``<directory>/memo.bin``."""

    filename = "memo.bin"

    def __init__(self, directory: str | os.PathLike):
        os.makedirs(directory, exist_ok=True)
        self.path = os.path.join(directory, self.filename)
        self._data: dict[bytes, Polynomial] = {}
        self._load()
        self._fh = open(self.path, "ab")
        if self._fh.tell() == 0:
            self._fh.write(MAGIC + _U32.pack(VERSION))
        self._finalizer = weakref.finalize(self, self._fh.close)

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        with open(self.path, "rb") as fh:
            raw = fh.read()
        if not raw:
            return
        if raw[:8] != MAGIC:
            raise CacheFormatError(f"{self.path}: not a memo file")
        (version,) = _U32.unpack(raw[8:12])
        if version != VERSION:
            raise CacheFormatError(f"{self.path}: unsupported version {version}")
        try:
            for key, f in _unpack(raw[12:]):
                self._data[key] = f
        except CacheFormatError:
            log.warning("%s: ignoring truncated tail", self.path)

    def __getitem__(self, key: bytes) -> Polynomial:
        return self._data[key]

    def __setitem__(self, key: bytes, value: Polynomial) -> None:
        if self._data.get(key) == value:
            return
        self._data[key] = value
        self._fh.write(_pack(key, value))

    def __delitem__(self, key: bytes) -> None:
        # deletions are memory-only; the file is append-only
        del self._data[key]

    def __iter__(self):
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def flush(self) -> None:
        self._fh.flush()

    def close(self) -> None:
        self._finalizer()

    def __enter__(self) -> "DiskCache":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
