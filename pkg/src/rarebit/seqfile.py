"""Bit-packed sequence files and the generation cache.

File layout::

    RBSQ1\\n
    {"m": 2, "length": N, "width": 1, "descriptor": "tm@0,0,1"}\\n
    <payload>

Each symbol takes ``width = ceil(log2 m)`` bits, written least significant
bit first; symbol n occupies bits n*width .. n*width+width-1 and bit b lives
in byte b // 8 at position b % 8.  For m = 2 that is 8 symbols per byte.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .sequences import GeneratorDescriptor, Sequence

MAGIC = b"RBSQ1"
CACHE_ENV = "RAREBIT_CACHE"


class SequenceFileError(ValueError):
    pass


def symbol_width(m: int) -> int:
    return max(1, (m - 1).bit_length())


def pack_symbols(symbols: np.ndarray, m: int) -> bytes:
    width = symbol_width(m)
    sym = np.asarray(symbols, dtype=np.uint64)
    if width == 1:
        bits = sym.astype(np.uint8)
    else:
        shifts = np.arange(width, dtype=np.uint64)
        bits = ((sym[:, None] >> shifts) & np.uint64(1)).astype(np.uint8).ravel()
    return np.packbits(bits, bitorder="little").tobytes()


def unpack_symbols(payload: bytes, m: int, length: int) -> np.ndarray:
    width = symbol_width(m)
    need = (length * width + 7) // 8
    if len(payload) != need:
        raise SequenceFileError(f"payload has {len(payload)} bytes, header implies {need}")
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="little")[: length * width]
    if width == 1:
        return bits.astype(np.int64)
    weights = (np.uint64(1) << np.arange(width, dtype=np.uint64))
    return (bits.reshape(length, width).astype(np.uint64) * weights).sum(axis=1).astype(np.int64)


def encode(seq: Sequence, descriptor: str | None = None) -> bytes:
    if descriptor is None:
        descriptor = seq.provenance.text() if seq.provenance is not None else ""
    header = {"m": seq.m, "length": len(seq), "width": symbol_width(seq.m), "descriptor": descriptor}
    return MAGIC + b"\n" + json.dumps(header, sort_keys=True).encode() + b"\n" + pack_symbols(seq.symbols, seq.m)


def decode(blob: bytes) -> Sequence:
    magic, sep, rest = blob.partition(b"\n")
    if magic != MAGIC or not sep:
        raise SequenceFileError(f"not a sequence file (magic {magic[:8]!r})")
    header_line, sep, payload = rest.partition(b"\n")
    if not sep:
        raise SequenceFileError("truncated header")
    try:
        header = json.loads(header_line)
        m, length = int(header["m"]), int(header["length"])
    except (ValueError, KeyError) as exc:
        raise SequenceFileError(f"bad header: {exc}") from None
    if header.get("width", symbol_width(m)) != symbol_width(m):
        raise SequenceFileError("header width does not match alphabet size")
    symbols = unpack_symbols(payload, m, length)
    if symbols.size and symbols.max() >= m:
        raise SequenceFileError("payload holds symbols outside the alphabet")
    desc = header.get("descriptor") or None
    provenance = GeneratorDescriptor.parse(desc) if desc else None
    return Sequence(symbols, m, provenance)


def atomic_write(path: Path, data: bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_sequence(path, seq: Sequence, descriptor: str | None = None) -> bytes:
    data = encode(seq, descriptor)
    atomic_write(Path(path), data)
    return data


def read_sequence(path) -> Sequence:
    return decode(Path(path).read_bytes())


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "rarebit"


class SequenceCache:
    """Content-addressed store keyed by (descriptor text, N)."""

    def __init__(self, root: Path | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()
        self.index_path = self.root / "index.json"

    def _index(self) -> dict:
        try:
            return json.loads(self.index_path.read_text())
        except (FileNotFoundError, ValueError):
            return {}

    @staticmethod
    def key(descriptor: str, N: int) -> str:
        return f"{descriptor}#{N}"

    def get(self, descriptor: str, N: int) -> bytes | None:
        entry = self._index().get(self.key(descriptor, N))
        if entry is None:
            return None
        path = self.root / entry["file"]
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            return None
        if hashlib.sha256(data).hexdigest() != entry["sha256"]:
            return None
        return data

    def put(self, descriptor: str, N: int, data: bytes) -> str:
        digest = hashlib.sha256(data).hexdigest()
        name = f"{digest}.rbsq"
        atomic_write(self.root / name, data)
        index = self._index()
        index[self.key(descriptor, N)] = {"file": name, "sha256": digest}
        atomic_write(self.index_path, json.dumps(index, indent=1, sort_keys=True).encode())
        return digest
