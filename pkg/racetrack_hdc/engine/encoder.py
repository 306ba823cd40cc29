# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""N-gram encoder and bundling counters of one processing group.

The encoder keeps the operands of the current n-gram in a ring of window
rows of DBC 9, the rows closest to a port first.  Role i holds the chunk of
the symbol seen i steps ago, rotated i times.  A step rotates the operands in
place newest first, clears the row of the retiring operand before the last
rotation and writes the fetched symbol into the spare row, which takes role 0.
Every row is visited from the home position (row 0 under the lower port), so
a step costs the same shifts whatever rows the roles sit in.  Rows outside
the ring are never written and stay zero, the padding of the XOR window.
"""

import logging
from collections import Counter
from typing import List, Optional

import numpy as np

from .layout import COUNTER_DBCS, ENCODER_DBC, IM_DBCS, ImPlacement, PgLayout
from ..cost import LedgerBook, Phase
from ..device.counter import CounterBank
from ..device.geometry import Address, Port
from ..device.periphery import CimOpKind, CimRequest, Rotation, cimop, rotate_read
from ..device.rtm import Dbc, Device, Subarray
from ..errors import ConfigError, PreconditionError
from ..hdc.reference import AssociativeMemory, ItemMemory, symbol_ids, ALPHABET

logger = logging.getLogger(__name__)


class EncoderStats(object):
    """Observed item-memory fetch shifts and per-character schedule cycles"""
    fetch_shifts: Counter
    schedule_cycles: Counter

    def __init__(self):
        self.fetch_shifts = Counter()
        self.schedule_cycles = Counter()

    def merge(self, other: 'EncoderStats'):
        self.fetch_shifts.update(other.fetch_shifts)
        self.schedule_cycles.update(other.schedule_cycles)

    @property
    def fetches(self) -> int:
        return sum(self.fetch_shifts.values())

    @property
    def max_fetch_shifts(self) -> int:
        return max(self.fetch_shifts, default=0)


class ProcessingGroup(object):
    """Subarrays holding the chunks of one hypervector, driven in lock step"""
    subarrays: List[Subarray]
    counters: List[CounterBank]
    book: LedgerBook
    stats: EncoderStats

    def __init__(self, device: Device, layout: PgLayout, index: int, placement: ImPlacement, ngram: int):
        geometry = device.geometry
        if not 1 <= ngram <= geometry.trd:
            raise ConfigError(f"n-gram length {ngram} outside 1..{geometry.trd} (transverse-read distance)")
        self.device = device
        self.geometry = geometry
        self.index = index
        self.placement = placement
        self.ngram = ngram
        self.subarrays = [device.subarray_at(layout.pg_subarray(index, j)) for j in range(layout.chunks)]
        self.counters = [CounterBank([s.cim_dbc(d) for d in COUNTER_DBCS]) for s in self.subarrays]
        self.book = LedgerBook()
        self.stats = EncoderStats()
        self._tile = geometry.tiles_per_subarray - 1
        ring = sorted(range(geometry.trd), key=self._visit_shifts)[:min(ngram + 1, geometry.trd)]
        self._roles = ring[:ngram]
        self._spare: Optional[int] = ring[ngram] if len(ring) > ngram else None

    def slot(self, row: int) -> int:
        return self.geometry.ap_low + row

    def _visit_shifts(self, row: int) -> int:
        return min(abs(self.slot(row) - p) for p in (self.geometry.ap_low, self.geometry.ap_high))

    @property
    def roles(self) -> List[int]:
        """Window rows of the operands, newest first"""
        return list(self._roles)

    @property
    def spare(self) -> Optional[int]:
        return self._spare

    def _chunk(self, hv: np.ndarray, j: int) -> np.ndarray:
        t = self.geometry.tracks_per_dbc
        return hv[j * t:(j + 1) * t]

    def _set_phase(self, phase: Phase):
        for subarray in self.subarrays:
            subarray.phase = phase

    def barrier(self):
        """Lock-step barrier: bits of all subarrays add up, cycles of the slowest count"""
        self.book = self.book.merge(LedgerBook.parallel(s.ledger.drain() for s in self.subarrays))

    def _rehome(self, subarray: Subarray):
        for d in range(IM_DBCS):
            subarray.cim_dbc(d).shift_to(self.geometry.ap_low, Port.LOWER)

    def write_item_memory(self, im: ItemMemory):
        """Writes chunk j of every symbol vector into subarray j at its placed row"""
        self._set_phase(Phase.IO)
        for j, subarray in enumerate(self.subarrays):
            for symbol in ALPHABET:
                d, loc = self.placement.slots[symbol]
                dbc = subarray.cim_dbc(d)
                dbc.write_row(dbc.align(loc), self._chunk(im[symbol], j))
            self._rehome(subarray)
        self.barrier()

    def write_class_vectors(self, am: AssociativeMemory, slots):
        """Stores class vectors in spare item-memory rows"""
        self._set_phase(Phase.IO)
        for j, subarray in enumerate(self.subarrays):
            for label, (d, loc) in zip(am.labels, slots):
                dbc = subarray.cim_dbc(d)
                dbc.write_row(dbc.align(loc), self._chunk(am[label], j))
            self._rehome(subarray)
        self.barrier()

    def read_row(self, subarray: int, dbc: int, location: int) -> np.ndarray:
        """Reads a cim-tile row back (IO)"""
        sub = self.subarrays[subarray]
        sub.phase = Phase.IO
        target = sub.cim_dbc(dbc)
        row = target.read_row(target.align(location))
        if dbc < IM_DBCS:
            self._rehome(sub)
        self.barrier()
        return row

    def _home(self, window: Dbc):
        window.shift_to(self.slot(0), Port.LOWER)

    def _rotate(self, window: Dbc, row: int):
        port = window.align(self.slot(row))
        window.write_row(port, rotate_read(window, port, Rotation.LEFT))
        self._home(window)

    def _put(self, window: Dbc, row: int, word: np.ndarray):
        window.write_row(window.align(self.slot(row)), word)
        self._home(window)

    def _step(self, symbol: str, emit: bool):
        n = self.ngram
        roles, spare = self._roles, self._spare
        target = roles[-1] if spare is None else spare
        clear = np.zeros(self.geometry.tracks_per_dbc, dtype=np.uint8)
        d, loc = self.placement.slots[symbol]
        for j, subarray in enumerate(self.subarrays):
            subarray.phase = Phase.ENCODE
            window = subarray.cim_dbc(ENCODER_DBC)
            self._home(window)
            before = subarray.ledger[Phase.ENCODE].cycles
            for i in range(n - 2):
                self._rotate(window, roles[i])
            if spare is not None:
                self._put(window, roles[-1], clear)
            if n > 1:
                self._rotate(window, roles[n - 2])
            im = subarray.cim_dbc(d)
            shifts = im.shift_to(loc)
            self._put(window, target, im.read_row(im.nearest_port(loc)))
            if not emit:
                continue
            src = Address(subarray.bank, subarray.index, self._tile, ENCODER_DBC, self.slot(0))
            xor = cimop(self.device, CimRequest(src, n, CimOpKind.XOR))
            if j == 0:
                cycles = subarray.ledger[Phase.ENCODE].cycles - before - shifts - 1
                self.stats.schedule_cycles[cycles] += 1
                logger.debug(f"pg {self.index}: '{symbol}' fetched with {shifts} shifts, schedule {cycles} cycles")
            subarray.phase = Phase.BUNDLE
            self.counters[j].increment_masked(xor.astype(bool))
        self.stats.fetch_shifts[shifts] += 1
        self._roles = [target] + roles[:-1]
        if spare is not None:
            self._spare = roles[-1]

    def run(self, text: str, preset: Optional[int] = None) -> int:
        """Encodes ``text`` into the bundling counters

        :param text: normalized symbols, at least N of them
        :param preset: counter preset for saturating threshold detection, None to count from zero
        :return: number of n-grams counted
        """
        if len(text) < self.ngram:
            raise PreconditionError(f"text of {len(text)} symbols is shorter than the n-gram length {self.ngram}")
        symbol_ids(text)
        self._set_phase(Phase.BUNDLE)
        for bank in self.counters:
            bank.saturating = preset is not None
            bank.preset(preset or 0)
        self.barrier()
        for k, symbol in enumerate(text):
            self._step(symbol, emit=k >= self.ngram - 1)
            self.barrier()
        return len(text) - self.ngram + 1

    def readout(self) -> np.ndarray:
        """Counter values of all chunks, read through the packed TR/P path"""
        self._set_phase(Phase.BUNDLE)
        values = np.concatenate([bank.readout() for bank in self.counters])
        self.barrier()
        return values

    def take_book(self) -> LedgerBook:
        """Returns the events since the last call"""
        book, self.book = self.book, LedgerBook()
        return book

    @property
    def counter_capacity(self) -> int:
        return self.counters[0].capacity
