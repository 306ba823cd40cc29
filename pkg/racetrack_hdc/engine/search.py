# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""In-memory Hamming distance search, one subarray per class."""

import logging
from typing import List, Tuple

import numpy as np

from .layout import DISTANCE_DBC, RESULT_DBC, PgLayout, SearchSlots
from ..cost import LedgerBook, Phase
from ..device.counter import RtmCounter
from ..device.geometry import Address, Port
from ..device.periphery import CimOpKind, CimRequest, cimop
from ..device.rtm import Device, Subarray
from ..errors import InvariantError, PreconditionError
from ..hdc.reference import AssociativeMemory, rank

logger = logging.getLogger(__name__)


class ClassSubarray(object):
    """Holds one class vector and computes its distance to a query"""

    def __init__(self, device: Device, subarray: Subarray, slots: SearchSlots, label: str):
        self.device = device
        self.subarray = subarray
        self.slots = slots
        self.label = label
        self._tile = device.geometry.tiles_per_subarray - 1
        self._width = device.geometry.tracks_per_dbc
        distance_dbc = subarray.cim_dbc(DISTANCE_DBC)
        distance_dbc.set_independent(True)
        self.counter = RtmCounter([distance_dbc.nanowire(t) for t in range(slots.digits)])

    def _chunk(self, hv: np.ndarray, j: int) -> np.ndarray:
        return hv[j * self._width:(j + 1) * self._width]

    def _write(self, slot: Tuple[int, int], row: np.ndarray):
        dbc = self.subarray.cim_dbc(slot[0])
        dbc.write_row(dbc.align(slot[1]), row)

    def load(self, hv: np.ndarray):
        self.subarray.phase = Phase.IO
        for j in range(self.slots.chunks):
            self._write(self.slots.class_slot(j), self._chunk(hv, j))

    def distance(self, query: np.ndarray) -> int:
        """Writes the query next to the class chunks and counts the differing bits

        Chunk XORs land in consecutive result rows, transverse reads over
        windows of them feed the per-track counts into the distance counter.
        """
        self.subarray.phase = Phase.SEARCH
        self.counter.preset(0)
        for j in range(self.slots.chunks):
            self._write(self.slots.query_slot(j), self._chunk(query, j))
        results = self.subarray.cim_dbc(RESULT_DBC)
        for j in range(self.slots.chunks):
            d, loc = self.slots.class_slot(j)
            src = Address(self.subarray.bank, self.subarray.index, self._tile, d, loc)
            row = cimop(self.device, CimRequest(src, 2, CimOpKind.XOR))
            results.write_row(results.align(self.slots.result_location(j)), row)
        for w in range(self.slots.windows):
            results.shift_to(self.slots.window_location(w), Port.LOWER)
            counts = results.tr_read()
            # one unit increment per counted one, track by track
            self.counter.increment(int(counts.sum()))
        return self.counter.readout()


class SimilaritySearch(object):
    """Class subarrays searched in parallel, argmin at the controller"""
    classes: List[ClassSubarray]
    book: LedgerBook

    def __init__(self, device: Device, layout: PgLayout, am: AssociativeMemory):
        if not len(am):
            raise PreconditionError("similarity search over an empty associative memory")
        self.slots = SearchSlots(device.geometry, layout.chunks)
        self.dim = layout.dim
        self.classes = []
        for i, label in enumerate(am.labels):
            subarray = device.subarray_at(layout.class_subarray(i))
            self.classes.append(ClassSubarray(device, subarray, self.slots, label))
        self.book = LedgerBook()
        for cls, label in zip(self.classes, am.labels):
            cls.load(am[label])
        self._barrier()
        logger.info(f"similarity search over {len(self.classes)} class subarrays")

    def _barrier(self):
        self.book = self.book.merge(LedgerBook.parallel(c.subarray.ledger.drain() for c in self.classes))

    def take_book(self) -> LedgerBook:
        """Returns the events since the last call"""
        book, self.book = self.book, LedgerBook()
        return book

    def search(self, query: np.ndarray) -> List[Tuple[str, int]]:
        """Distances of ``query`` to every class, ranked, insertion order on ties"""
        if query.shape != (self.dim,):
            raise PreconditionError(f"query of shape {query.shape} does not match the stored classes")
        distances = [(c.label, c.distance(query)) for c in self.classes]
        self._barrier()
        if any(d < 0 or d > query.size for _, d in distances):
            raise InvariantError(f"distance counter out of range: {distances}")
        return rank(distances)
