# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Binary spatter code HDC in software, the oracle of the in-memory pipeline.

Hypervectors are uint8 arrays of 0/1 bits.  Permutation rotates every 512-bit
chunk on its own, the same way the row buffer rotates one DBC row.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..errors import ConfigError, PreconditionError

logger = logging.getLogger(__name__)

ALPHABET = "abcdefghijklmnopqrstuvwxyz "
CHUNK_BITS = 512
PRNG_ALGORITHM = "numpy.PCG64/random_raw"

Hypervector = np.ndarray

_SYMBOL_IDS = {s: i for i, s in enumerate(ALPHABET)}
_BLOCK = 2048


@dataclass(frozen=True)
class EncodeParams:
    dim: int = 8192
    ngram: int = 4
    seed: int = 0

    def __post_init__(self):
        check_dim(self.dim)
        if self.ngram < 1:
            raise ConfigError(f"n-gram length {self.ngram} must be at least 1")


def check_dim(dim: int, chunk: int = CHUNK_BITS):
    if dim <= 0 or dim % chunk:
        raise ConfigError(f"dimension {dim} is not a positive multiple of {chunk}")


def symbol_ids(text: str) -> np.ndarray:
    """Alphabet indices of a normalized text"""
    try:
        return np.fromiter((_SYMBOL_IDS[c] for c in text), dtype=np.int64, count=len(text))
    except KeyError as e:
        raise PreconditionError(f"symbol {e.args[0]!r} is not in the alphabet") from None


def symbol_frequencies(texts: Iterable[str]) -> Dict[str, int]:
    """Occurrences of every alphabet symbol, zero counts included"""
    counts = np.zeros(len(ALPHABET), dtype=np.int64)
    for text in texts:
        counts += np.bincount(symbol_ids(text), minlength=len(ALPHABET))
    return {s: int(c) for s, c in zip(ALPHABET, counts)}


class ItemMemory(object):
    """Seeded random hypervector of every alphabet symbol"""
    vectors: np.ndarray
    seed: int

    def __init__(self, vectors: np.ndarray, seed: int):
        if vectors.shape[0] != len(ALPHABET):
            raise PreconditionError(f"item memory needs {len(ALPHABET)} vectors, got {vectors.shape[0]}")
        self.vectors = vectors
        self.seed = seed

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __getitem__(self, symbol: str) -> Hypervector:
        if symbol not in _SYMBOL_IDS:
            raise PreconditionError(f"symbol {symbol!r} is not in the alphabet")
        return self.vectors[_SYMBOL_IDS[symbol]]

    def __eq__(self, other):
        return isinstance(other, ItemMemory) and np.array_equal(self.vectors, other.vectors)


def gen_item_memory(seed: int, dim: int) -> ItemMemory:
    """Draws the item memory from PCG64 raw output, bits little-endian per word

    :param seed: generator seed
    :param dim: dimensionality, a multiple of 512
    :return: item memory
    """
    check_dim(dim)
    words = np.random.PCG64(seed).random_raw(len(ALPHABET) * dim // 64)
    bits = np.unpackbits(words.astype('<u8').view(np.uint8), bitorder='little')
    return ItemMemory(bits.reshape(len(ALPHABET), dim), seed)


def permute(hv: Hypervector, n: int, chunk: int = CHUNK_BITS) -> Hypervector:
    """Rotates every chunk left by ``n`` bits (bit i moves to bit i+n)"""
    if n < 0:
        raise PreconditionError(f"negative permutation {n}")
    hv = np.asarray(hv)
    return np.roll(hv.reshape(-1, chunk), n, axis=-1).reshape(hv.shape)


def bind_ngram(window: Sequence[str], im: ItemMemory) -> Hypervector:
    """XOR of the window's vectors, the first one permuted N-1 times, the last not at all"""
    n = len(window)
    if n < 1:
        raise PreconditionError("empty n-gram window")
    res = np.zeros(im.dim, dtype=np.uint8)
    for i, symbol in enumerate(window):
        res ^= permute(im[symbol], n - 1 - i)
    return res


def ngram_counts(text: str, im: ItemMemory, ngram: int) -> Tuple[np.ndarray, int]:
    """Per-bit number of ones over all n-grams of ``text``

    :return: counts per bit and the number of n-grams
    """
    if len(text) < ngram:
        raise PreconditionError(f"text of {len(text)} symbols is shorter than the n-gram length {ngram}")
    ids = symbol_ids(text)
    shifted = [permute(im.vectors, p) for p in range(ngram)]
    total = len(text) - ngram + 1
    counts = np.zeros(im.dim, dtype=np.int64)
    for start in range(0, total, _BLOCK):
        stop = min(start + _BLOCK, total)
        grams = np.zeros((stop - start, im.dim), dtype=np.uint8)
        for i in range(ngram):
            grams ^= shifted[ngram - 1 - i][ids[start + i:stop + i]]
        counts += grams.sum(axis=0, dtype=np.int64)
    return counts, total


def threshold(counts: np.ndarray, ngrams: int) -> Hypervector:
    """Majority rule, bit set iff its count exceeds floor(ngrams / 2)"""
    return (np.asarray(counts) > ngrams // 2).astype(np.uint8)


def encode(text: str, im: ItemMemory, ngram: int) -> Hypervector:
    counts, total = ngram_counts(text, im, ngram)
    return threshold(counts, total)


def hamming(a: Hypervector, b: Hypervector) -> int:
    if np.shape(a) != np.shape(b):
        raise PreconditionError(f"dimension mismatch: {np.shape(a)} vs {np.shape(b)}")
    return int(np.count_nonzero(np.asarray(a) != np.asarray(b)))


class AssociativeMemory(object):
    """Class vectors by label, kept in insertion order"""
    entries: 'OrderedDict[str, Hypervector]'

    def __init__(self, entries: Iterable[Tuple[str, Hypervector]] = ()):
        self.entries = OrderedDict()
        for label, hv in entries:
            self.add(label, hv)

    def add(self, label: str, hv: Hypervector):
        if label in self.entries:
            raise PreconditionError(f"duplicate class label '{label}'")
        if self.entries and np.shape(hv) != (self.dim,):
            raise PreconditionError(f"class '{label}' has dimension {np.shape(hv)}, memory has {self.dim}")
        self.entries[label] = np.asarray(hv, dtype=np.uint8)

    @property
    def labels(self) -> List[str]:
        return list(self.entries)

    @property
    def dim(self) -> int:
        return next(iter(self.entries.values())).shape[0]

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, label: str) -> Hypervector:
        return self.entries[label]

    def __eq__(self, other):
        return isinstance(other, AssociativeMemory) and self.labels == other.labels and \
            all(np.array_equal(self[k], other[k]) for k in self.labels)

    def distances(self, query: Hypervector) -> List[Tuple[str, int]]:
        return [(label, hamming(query, hv)) for label, hv in self.entries.items()]


def classify(query: Hypervector, am: AssociativeMemory) -> str:
    """Label of the nearest class vector, the first inserted one on ties"""
    if not len(am):
        raise PreconditionError("classification against an empty associative memory")
    return rank(am.distances(query))[0][0]


def rank(distances: Sequence[Tuple[str, int]]) -> List[Tuple[str, int]]:
    """Orders (label, distance) pairs by distance, stable on ties"""
    return sorted(distances, key=lambda e: e[1])


def train(corpus: Mapping[str, str], params: EncodeParams, im: Optional[ItemMemory] = None) -> AssociativeMemory:
    """One class vector per label

    :param corpus: training text per label, in class order
    :param params: dimensionality, n-gram length and seed
    :param im: item memory, drawn from ``params.seed`` if None
    :return: associative memory
    """
    if im is None:
        im = gen_item_memory(params.seed, params.dim)
    am = AssociativeMemory()
    for label, text in corpus.items():
        logger.info(f"reference training '{label}' on {len(text)} symbols")
        am.add(label, encode(text, im, params.ngram))
    return am
