# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Training and classification on the simulated racetrack device.

Processing groups encode contiguous parts of a text that overlap by N-1
symbols, so together they see exactly the n-grams of the whole text.  The
controller combines their counters according to the bundling mode.
"""

import logging
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from .encoder import EncoderStats, ProcessingGroup
from .layout import BundlingMode, ImPlacement, PgLayout, am_slots, plan_placement
from .search import SimilaritySearch
from ..config import RunConfig
from ..cost import LedgerBook, Phase
from ..device.rtm import Device
from ..errors import InvariantError, ModeError, PreconditionError
from ..hdc import reference
from ..hdc.reference import AssociativeMemory, Hypervector, ItemMemory

logger = logging.getLogger(__name__)


def split_text(text: str, parts: int, ngram: int) -> List[str]:
    """Splits the n-gram positions of ``text`` into contiguous ranges

    :return: one text per part, empty where a part gets no n-gram
    """
    total = len(text) - ngram + 1
    if total < 1:
        raise PreconditionError(f"text of {len(text)} symbols is shorter than the n-gram length {ngram}")
    chunks = []
    for positions in np.array_split(np.arange(total), parts):
        chunks.append(text[positions[0]:positions[-1] + ngram] if len(positions) else '')
    return chunks


class TrainResult(object):
    am: AssociativeMemory
    books: Dict[str, LedgerBook]
    io: LedgerBook

    def __init__(self, am: AssociativeMemory, books: Dict[str, LedgerBook], io: LedgerBook):
        self.am = am
        self.books = books
        self.io = io

    def total(self) -> LedgerBook:
        res = self.io
        for book in self.books.values():
            res = res.merge(book)
        return res


class QueryResult(object):
    label: str
    distances: List[Tuple[str, int]]
    query: Hypervector
    book: LedgerBook

    def __init__(self, label: str, distances: List[Tuple[str, int]], query: Hypervector, book: LedgerBook):
        self.label = label
        self.distances = distances
        self.query = query
        self.book = book


class RacetrackEngine(object):
    """One simulated device running the HDC pipeline

    :param config: resolved run configuration
    :param placement: item-memory placement
    :param im: item memory, drawn from the configured seed if None
    """
    config: RunConfig
    device: Device
    layout: PgLayout
    placement: ImPlacement
    io: LedgerBook

    def __init__(self, config: RunConfig, placement: ImPlacement, im: Optional[ItemMemory] = None):
        if config.mode is BundlingMode.PRESET and config.pgs > 1:
            raise ModeError("preset bundling thresholds per processing group, use one group or exact-sum")
        self.config = config
        self.device = Device(config.geometry)
        self.layout = PgLayout(config.geometry, config.dim, config.pgs)
        self.placement = placement
        self.im = im if im is not None else reference.gen_item_memory(config.seed, config.dim)
        if self.im.dim != config.dim:
            raise PreconditionError(f"item memory of dimension {self.im.dim}, configured {config.dim}")
        self.groups = [ProcessingGroup(self.device, self.layout, p, placement, config.ngram)
                       for p in range(config.pgs)]
        for group in self.groups:
            group.write_item_memory(self.im)
        self.io = self._collect()
        self.search: Optional[SimilaritySearch] = None

    @classmethod
    def for_corpus(cls, config: RunConfig, corpus: Mapping[str, str]) -> 'RacetrackEngine':
        """Engine whose item memory is placed by the symbol frequencies of ``corpus``"""
        frequencies = reference.symbol_frequencies(corpus.values())
        return cls(config, plan_placement(frequencies, config.geometry))

    def _collect(self) -> LedgerBook:
        return LedgerBook.parallel(group.take_book() for group in self.groups)

    @property
    def stats(self) -> EncoderStats:
        res = EncoderStats()
        for group in self.groups:
            res.merge(group.stats)
        return res

    def encode(self, text: str) -> Tuple[Hypervector, LedgerBook]:
        """Encodes ``text`` on the device

        :return: hypervector and the events of encoding and bundling
        """
        n = self.config.ngram
        chunks = split_text(text, len(self.groups), n)
        mode = self.config.mode
        total = len(text) - n + 1

        if mode is BundlingMode.EXACT_SUM:
            counts = np.zeros(self.config.dim, dtype=np.int64)
            for group, chunk in zip(self.groups, chunks):
                if chunk:
                    group.run(chunk)
                    counts += group.readout()
            hv = reference.threshold(counts, total)
        else:
            votes = np.zeros(self.config.dim, dtype=np.int64)
            voters = 0
            for group, chunk in zip(self.groups, chunks):
                if not chunk:
                    continue
                grams = len(chunk) - n + 1
                capacity = group.counter_capacity
                group.run(chunk, preset=capacity - (grams // 2 + 1))
                votes += group.readout() == capacity
                voters += 1
            hv = (2 * votes > voters).astype(np.uint8)
        book = self._collect()
        logger.info(f"encoded {len(text)} symbols in {book.total().cycles} cycles")
        return hv, book

    def train(self, corpus: Mapping[str, str]) -> TrainResult:
        """One class vector per label, stored in spare item-memory rows of the first group"""
        am = AssociativeMemory()
        books = {}
        for label, text in corpus.items():
            logger.info(f"training '{label}' on {len(text)} symbols")
            hv, books[label] = self.encode(text)
            am.add(label, hv)
        slots = am_slots(len(am), self.placement, self.config.geometry)
        self.groups[0].write_class_vectors(am, slots)
        io = self._collect()
        self.io = self.io.merge(io)
        return TrainResult(am, books, io)

    def load_classes(self, am: AssociativeMemory) -> LedgerBook:
        """Writes every class vector into its similarity-search subarray"""
        self.search = SimilaritySearch(self.device, self.layout, am)
        io = self.search.take_book()
        self.io = self.io.merge(io)
        return io

    def classify(self, text: str) -> QueryResult:
        if self.search is None:
            raise PreconditionError("no classes loaded for the similarity search")
        query, book = self.encode(text)
        distances = self.search.search(query)
        book = book.merge(self.search.take_book())
        logger.info(f"classified as '{distances[0][0]}' in {book.total().cycles} cycles")
        return QueryResult(distances[0][0], distances, query, book)


def check_agreement(label: str, device: Hypervector, expected: Hypervector):
    """Device and reference vectors must match bit for bit"""
    if not np.array_equal(device, expected):
        differ = int(np.count_nonzero(np.asarray(device) != np.asarray(expected)))
        raise InvariantError(f"{label}: device vector differs from the reference in {differ} bits")


def check_query(result: QueryResult, reference_query: Hypervector, am: AssociativeMemory):
    """Query vector, distances and label must equal the reference pipeline's"""
    check_agreement('query', result.query, reference_query)
    expected = reference.rank(am.distances(reference_query))
    if result.distances != expected:
        raise InvariantError(f"device distances {result.distances} differ from the reference {expected}")


def phase_book(book: LedgerBook, *phases: Phase) -> LedgerBook:
    """Book restricted to ``phases``"""
    return LedgerBook({p: book[p] for p in phases})
