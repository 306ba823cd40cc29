# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Binary container for item and associative memories.

Layout, little-endian::

    magic  4s   b'RTHD'
    version H
    dim     I
    seed    Q
    count   I
    count x (label length H, label UTF-8, dim/8 payload bytes)

Payload bits are packed little-endian within bytes, chunk 0 first.
"""

import struct
from collections import OrderedDict
from typing import Iterable, List, Tuple

import numpy as np

from .reference import ALPHABET, AssociativeMemory, Hypervector, ItemMemory, check_dim
from ..errors import InputError

MAGIC = b'RTHD'
VERSION = 1

_HEADER = struct.Struct('<4sHIQI')
_LABEL = struct.Struct('<H')


def dumps(dim: int, seed: int, entries: Iterable[Tuple[str, Hypervector]]) -> bytes:
    entries = list(entries)
    parts = [_HEADER.pack(MAGIC, VERSION, dim, seed, len(entries))]
    for label, hv in entries:
        encoded = label.encode('utf-8')
        parts.append(_LABEL.pack(len(encoded)))
        parts.append(encoded)
        parts.append(np.packbits(np.asarray(hv, dtype=np.uint8), bitorder='little').tobytes())
    return b''.join(parts)


def loads(data: bytes) -> Tuple[int, int, List[Tuple[str, Hypervector]]]:
    """Parses a container

    :return: dimensionality, seed and the (label, vector) entries in order
    """
    try:
        magic, version, dim, seed, count = _HEADER.unpack_from(data, 0)
    except struct.error:
        raise InputError("truncated container header") from None
    if magic != MAGIC:
        raise InputError(f"not a hypervector container (magic {magic!r})")
    if version != VERSION:
        raise InputError(f"unsupported container version {version}")
    check_dim(dim)
    pos = _HEADER.size
    payload = dim // 8
    entries = []
    for _ in range(count):
        try:
            (length,) = _LABEL.unpack_from(data, pos)
        except struct.error:
            raise InputError("truncated container entry") from None
        pos += _LABEL.size
        if pos + length + payload > len(data):
            raise InputError("truncated container entry")
        label = data[pos:pos + length].decode('utf-8')
        pos += length
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8, count=payload, offset=pos), bitorder='little')
        entries.append((label, bits))
        pos += payload
    if pos != len(data):
        raise InputError(f"{len(data) - pos} trailing bytes after {count} entries")
    return dim, seed, entries


def _read(path: str) -> bytes:
    try:
        with open(path, 'rb') as f:
            return f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None


def save_memory(path: str, am: AssociativeMemory, seed: int):
    with open(path, 'wb') as f:
        f.write(dumps(am.dim, seed, am.entries.items()))


def load_memory(path: str) -> Tuple[AssociativeMemory, int]:
    """Loads an associative memory and the item-memory seed it was trained with"""
    _, seed, entries = loads(_read(path))
    return AssociativeMemory(entries), seed


def save_item_memory(path: str, im: ItemMemory):
    with open(path, 'wb') as f:
        f.write(dumps(im.dim, im.seed, zip(ALPHABET, im.vectors)))


def load_item_memory(path: str) -> ItemMemory:
    _, seed, entries = loads(_read(path))
    symbols = OrderedDict(entries)
    if list(symbols) != list(ALPHABET):
        raise InputError(f"{path} does not hold one vector per alphabet symbol")
    return ItemMemory(np.stack(list(symbols.values())), seed)
