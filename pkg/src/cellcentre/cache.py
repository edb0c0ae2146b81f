"""
On-disk cache for KL tables, cell partitions and J-ring tables.

File layout::

    MAGIC | u64 header length | JSON header | (u64 length | .npy bytes)*

The header names the sections in order and carries a sha256 over the
checksum-free header and every section.  Anything that fails to parse, fails
the checksum, or carries another schema version is treated as a miss; the
caller recomputes and overwrites.
"""

from __future__ import annotations

import contextlib
import fcntl
import hashlib
import io
import json
import logging
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cells import CellPartition
from .coxeter import GroupTable
from .jring import JRingTable
from .kl import NORMALIZATION, KLTable

__all__ = [
    "SCHEMA_VERSION", "CacheEntry", "CacheLockedError", "cache_store", "cache_load",
    "cache_lock", "entry_path", "matrix_key", "kl_entry", "kl_from_entry", "cells_entry",
    "cells_from_entry", "jring_entry", "jring_from_entry",
]

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAGIC = b"CELLCACHE\x00"
_U64 = struct.Struct("<Q")


class CacheLockedError(RuntimeError):
    pass


@dataclass(eq=False)
class CacheEntry:
    kind: str                        # kl | cells | jring
    matrix: list[list[int]]
    payload: dict[str, np.ndarray]
    meta: dict = field(default_factory=dict)
    generator_order: list[int] | None = None
    normalization: str = NORMALIZATION
    schema_version: int = SCHEMA_VERSION
    checksum: str = ""

    def __post_init__(self):
        if self.generator_order is None:
            self.generator_order = list(range(len(self.matrix)))

    def header(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "matrix": self.matrix,
            "generator_order": self.generator_order,
            "normalization": self.normalization,
            "meta": self.meta,
            "sections": sorted(self.payload),
        }

    def same_as(self, other: CacheEntry) -> bool:
        return self.header() == other.header() and all(
            np.array_equal(self.payload[k], other.payload[k])
            and self.payload[k].dtype == other.payload[k].dtype for k in self.payload)


def _key(kind: str, matrix, normalization: str, extra: str = "") -> str:
    blob = json.dumps([matrix, normalization, extra], sort_keys=True).encode()
    return f"{kind}-{hashlib.sha256(blob).hexdigest()[:20]}{extra and '-' + extra}.cce"


def entry_path(cache_dir, kind: str, matrix, normalization: str = NORMALIZATION,
               extra: str = "") -> Path:
    return Path(cache_dir) / _key(kind, matrix, normalization, extra)


def _npy_bytes(a: np.ndarray) -> bytes:
    buf = io.BytesIO()
    np.save(buf, np.ascontiguousarray(a), allow_pickle=False)
    return buf.getvalue()


def _encode(entry: CacheEntry) -> bytes:
    head = entry.header()
    sections = [_npy_bytes(entry.payload[k]) for k in head["sections"]]
    plain = json.dumps(head, sort_keys=True).encode()
    digest = hashlib.sha256(plain)
    for s in sections:
        digest.update(s)
    head["checksum"] = digest.hexdigest()
    hbytes = json.dumps(head, sort_keys=True).encode()
    parts = [MAGIC, _U64.pack(len(hbytes)), hbytes]
    for s in sections:
        parts += [_U64.pack(len(s)), s]
    return b"".join(parts)


def _decode(data: bytes) -> CacheEntry:
    if not data.startswith(MAGIC):
        raise ValueError("bad magic")
    pos = len(MAGIC)
    (hlen,) = _U64.unpack_from(data, pos)
    pos += _U64.size
    head = json.loads(data[pos:pos + hlen])
    pos += hlen
    checksum = head.pop("checksum")
    digest = hashlib.sha256(json.dumps(head, sort_keys=True).encode())
    payload = {}
    for name in head["sections"]:
        (slen,) = _U64.unpack_from(data, pos)
        pos += _U64.size
        chunk = data[pos:pos + slen]
        if len(chunk) != slen:
            raise ValueError("truncated section")
        pos += slen
        digest.update(chunk)
        payload[name] = np.load(io.BytesIO(chunk), allow_pickle=False)
    if pos != len(data):
        raise ValueError("trailing bytes")
    if digest.hexdigest() != checksum:
        raise ValueError("checksum mismatch")
    return CacheEntry(head["kind"], head["matrix"], payload, head["meta"],
                      head["generator_order"], head["normalization"],
                      head["schema_version"], checksum)


def cache_store(cache_dir, entry: CacheEntry, extra: str = "") -> Path:
    """Write atomically (temp file + rename); returns the entry path."""
    path = entry_path(cache_dir, entry.kind, entry.matrix, entry.normalization, extra)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = _encode(entry)
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    entry.checksum = _decode(data).checksum
    return path


def cache_load(cache_dir, kind: str, matrix, normalization: str = NORMALIZATION,
               extra: str = "") -> CacheEntry | None:
    """The stored entry, or None on a miss (absent, corrupt, stale)."""
    path = entry_path(cache_dir, kind, matrix, normalization, extra)
    if not path.exists():
        return None
    try:
        entry = _decode(path.read_bytes())
    except Exception as exc:  # corrupt entries are a miss, never a crash
        log.warning("ignoring corrupt cache entry %s: %s", path.name, exc)
        return None
    if entry.schema_version != SCHEMA_VERSION:
        log.info("cache entry %s has schema %s, recomputing", path.name, entry.schema_version)
        return None
    if entry.kind != kind or entry.matrix != matrix or entry.normalization != normalization:
        log.warning("cache entry %s does not match its key, recomputing", path.name)
        return None
    return entry


@contextlib.contextmanager
def cache_lock(cache_dir):
    """Advisory exclusive lock on the cache directory for one process."""
    d = Path(cache_dir)
    d.mkdir(parents=True, exist_ok=True)
    fh = open(d / ".lock", "a+")
    try:
        try:
            fcntl.flock(fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
        except BlockingIOError:
            raise CacheLockedError(f"cache directory {d} is in use by another process")
        yield d
    finally:
        with contextlib.suppress(OSError):
            fcntl.flock(fh, fcntl.LOCK_UN)
        fh.close()


def matrix_key(g: GroupTable) -> list[list[int]]:
    return [[int(v) for v in row] for row in g.matrix.entries]


def _narrow(a: np.ndarray) -> np.ndarray:
    if a.size and np.abs(a).max() < 2 ** 31:
        return a.astype(np.int32)
    return a.astype(np.int64)


# KL tables: Bruhat pairs (w, x) with their coefficient rows

def kl_entry(kl: KLTable) -> CacheEntry:
    w, x = np.nonzero(kl.P[:, :, 0])
    counts = np.array([len(z) for z in kl.mu_z], dtype=np.int64)
    payload = {
        "pairs": np.stack([w, x], axis=1).astype(np.int32),
        "coeffs": _narrow(kl.P[w, x]),
        "mu_counts": counts,
        "mu_z": np.concatenate(kl.mu_z).astype(np.int32) if counts.sum() else np.zeros(0, np.int32),
        "mu_val": _narrow(np.concatenate(kl.mu_val)) if counts.sum() else np.zeros(0, np.int32),
    }
    meta = {"n": kl.n, "depth": int(kl.P.shape[2])}
    return CacheEntry("kl", matrix_key(kl.group), payload, meta,
                      normalization=kl.version)


def kl_from_entry(entry: CacheEntry, g: GroupTable) -> KLTable:
    n, depth = entry.meta["n"], entry.meta["depth"]
    if n != g.n:
        raise ValueError("cached KL table does not match the group")
    P = np.zeros((n, n, depth), dtype=np.int64)
    pairs = entry.payload["pairs"]
    P[pairs[:, 0], pairs[:, 1]] = entry.payload["coeffs"]
    bounds = np.concatenate([[0], np.cumsum(entry.payload["mu_counts"])])
    mz = entry.payload["mu_z"].astype(np.int64)
    mv = entry.payload["mu_val"].astype(np.int64)
    mu_z = [mz[bounds[i]:bounds[i + 1]] for i in range(n)]
    mu_val = [mv[bounds[i]:bounds[i + 1]] for i in range(n)]
    return KLTable(g, P, mu_z, mu_val, entry.normalization)


# Cell partitions, including the leading coefficient rows per left cell

def cells_entry(part: CellPartition) -> CacheEntry:
    ids = sorted(part.leading)
    rows = [part.leading[c] for c in ids]
    payload = {
        "left": part.left, "right": part.right, "two_sided": part.two_sided,
        "order": part.order.astype(np.uint8), "a": part.a, "delta": part.delta,
        "delta_coeff": part.delta_coeff, "distinguished": part.distinguished.astype(np.uint8),
        "leading_cells": np.asarray(ids, dtype=np.int64),
        "leading_counts": np.asarray([len(r) for r in rows], dtype=np.int64),
        "leading": np.concatenate(rows).astype(np.int64) if rows else np.zeros((0, 4), np.int64),
    }
    return CacheEntry("cells", matrix_key(part.group), payload,
                      {"a_method": part.a_method})


def cells_from_entry(entry: CacheEntry, g: GroupTable) -> CellPartition:
    p = entry.payload
    if len(p["left"]) != g.n:
        raise ValueError("cached partition does not match the group")
    bounds = np.concatenate([[0], np.cumsum(p["leading_counts"])])
    leading = {int(c): p["leading"][bounds[i]:bounds[i + 1]]
               for i, c in enumerate(p["leading_cells"].tolist())}
    return CellPartition(g, p["left"], p["right"], p["two_sided"], p["order"].astype(bool),
                         p["a"], p["delta"], p["delta_coeff"], p["distinguished"].astype(bool),
                         entry.meta["a_method"], leading)


def jring_entry(j: JRingTable, matrix) -> CacheEntry:
    payload = {"elements": j.elements, "distinguished": j.distinguished, "triples": j.triples}
    meta = {"cell": j.cell, "a": j.a, "guards": dict(sorted(j.guards.items()))}
    return CacheEntry("jring", matrix, payload, meta)


def jring_from_entry(entry: CacheEntry, g: GroupTable) -> JRingTable:
    p = entry.payload
    return JRingTable(entry.meta["cell"], p["elements"], entry.meta["a"], p["distinguished"],
                      g.inverse, p["triples"], dict(entry.meta["guards"]))
