"""Binary checkpoint files for resumable orbit searches.

Layout (all integers little-endian):

    header:  magic "TSORBIT1" | version u32 | d u32 | generator-mode u8
             | start key u64
    blocks:  type u8 | payload length u64 | payload | crc32(payload) u32

Block types: 1 = visited delta (count u64, then count u64 entries packing
``key << 1 | parity``), 2 = frontier (depth u32, count u64, count u64 keys),
3 = commit (expanded u64, parity flag u8, diameter u32).

The file only grows: every checkpoint appends the newly visited states, the
whole current frontier, and a commit marker, then fsyncs.  On resume the
blocks are replayed in order up to the last commit whose CRC verifies;
anything after it (a torn write) is ignored and overwritten.
"""

from __future__ import annotations

import os
import struct
import zlib
from dataclasses import dataclass

from .errors import InputError

MAGIC = b"TSORBIT1"
VERSION = 1
GEN_CODES = {"involutions_only": 0, "involutions_plus_symmetry": 1}
GEN_NAMES = {v: k for k, v in GEN_CODES.items()}

_HEADER = struct.Struct("<8sIIBQ")
_BLOCK_HEAD = struct.Struct("<BQ")
_CRC = struct.Struct("<I")


@dataclass
class CheckpointState:
    d: int
    generators: str
    start_key: int
    visited: dict[int, int]  # key -> parity bit
    frontier: list[int]
    depth: int
    expanded: int
    parity_ok: bool
    diameter: int


class CheckpointWriter:
    def __init__(self, path: str, d: int, generators: str, start_key: int,
                 append: bool = False):
        if generators not in GEN_CODES:
            raise InputError(f"unknown generator mode {generators!r}")
        mode = "r+b" if append and os.path.exists(path) else "wb"
        self._f = open(path, mode)
        if mode == "wb":
            self._f.write(_HEADER.pack(MAGIC, VERSION, d, GEN_CODES[generators], start_key))
            self._f.flush()
            os.fsync(self._f.fileno())
        else:
            self._f.seek(0, os.SEEK_END)
        self.path = path

    def _block(self, btype: int, payload: bytes):
        self._f.write(_BLOCK_HEAD.pack(btype, len(payload)))
        self._f.write(payload)
        self._f.write(_CRC.pack(zlib.crc32(payload)))

    def checkpoint(self, new_visited, frontier, depth: int, expanded: int,
                   parity_ok: bool, diameter: int):
        """Append one consistent snapshot increment and fsync."""
        pay = bytearray(struct.pack("<Q", len(new_visited)))
        for key, parity in new_visited:
            pay += struct.pack("<Q", (key << 1) | parity)
        self._block(1, bytes(pay))
        pay = bytearray(struct.pack("<IQ", depth, len(frontier)))
        for key in frontier:
            pay += struct.pack("<Q", key)
        self._block(2, bytes(pay))
        self._block(3, struct.pack("<QBI", expanded, 1 if parity_ok else 0, diameter))
        self._f.flush()
        os.fsync(self._f.fileno())

    def close(self):
        self._f.close()


def load_checkpoint(path: str) -> CheckpointState:
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < _HEADER.size:
        raise InputError(f"{path}: not a checkpoint file")
    magic, version, d, gen, start_key = _HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise InputError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise InputError(f"{path}: unsupported version {version}")
    visited: dict[int, int] = {}
    pending: dict[int, int] = {}
    frontier: list[int] = []
    pending_frontier: list[int] = []
    depth = expanded = diameter = 0
    pending_depth = 0
    parity_ok = True
    off = _HEADER.size
    while off + _BLOCK_HEAD.size <= len(raw):
        btype, plen = _BLOCK_HEAD.unpack_from(raw, off)
        body_start = off + _BLOCK_HEAD.size
        body_end = body_start + plen
        if body_end + _CRC.size > len(raw):
            break  # torn tail
        payload = raw[body_start:body_end]
        (crc,) = _CRC.unpack_from(raw, body_end)
        if crc != zlib.crc32(payload):
            break
        off = body_end + _CRC.size
        if btype == 1:
            (count,) = struct.unpack_from("<Q", payload, 0)
            for k in range(count):
                (packed,) = struct.unpack_from("<Q", payload, 8 + 8 * k)
                pending[packed >> 1] = packed & 1
        elif btype == 2:
            cdepth, count = struct.unpack_from("<IQ", payload, 0)
            pending_frontier = [
                struct.unpack_from("<Q", payload, 12 + 8 * k)[0]
                for k in range(count)
            ]
            pending_depth = cdepth
        elif btype == 3:
            expanded, pflag, diameter = struct.unpack_from("<QBI", payload, 0)
            parity_ok = bool(pflag)
            visited.update(pending)
            pending = {}
            frontier = pending_frontier
            depth = pending_depth
    return CheckpointState(
        d=d,
        generators=GEN_NAMES[gen],
        start_key=start_key,
        visited=visited,
        frontier=frontier,
        depth=depth,
        expanded=expanded,
        parity_ok=parity_ok,
        diameter=diameter,
    )
