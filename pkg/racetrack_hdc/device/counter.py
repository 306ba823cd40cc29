# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Base-10 Johnson counters on transverse-written nanowires.

A digit is the five-domain window between the access ports.  Values 0..4 are
``1^k 0^(5-k)`` with the upper-port bit P = 0, values 5..9 are ``0^k 1^(5-k)``
with P = 1.  An increment pushes the complement of P under the lower port; a
digit wraps from 9 to 0 exactly when P falls from 1 to 0, which the controller
turns into one increment of the next digit.
"""

import logging
import math
from collections import OrderedDict
from typing import List, Sequence, Tuple

import numpy as np

from .geometry import DeviceGeometry, Port
from .periphery import masked_transverse_write, transverse_write_window
from .rtm import Dbc, Nanowire, Subarray
from ..cost import EventClass
from ..errors import AlignmentError, ContractError, CounterOverflowError, CounterStateError

logger = logging.getLogger(__name__)

DIGIT_WIDTH = 5
RADIX = 2 * DIGIT_WIDTH
READOUT_BITS = DIGIT_WIDTH + 1


def digits_required(capacity: int) -> int:
    """Number of digit nanowires for counting up to ``capacity``"""
    if capacity < 1:
        raise ContractError(f"counter capacity {capacity} must be positive")
    return len(str(int(capacity)))


def johnson_window(value: int) -> List[int]:
    """Window bits of a digit value, lower port first"""
    if not 0 <= value < RADIX:
        raise ContractError(f"digit value {value} outside 0..{RADIX - 1}")
    if value < DIGIT_WIDTH:
        return [1] * value + [0] * (DIGIT_WIDTH - value)
    k = value - DIGIT_WIDTH
    return [0] * k + [1] * (DIGIT_WIDTH - k)


def decode_digit(count: int, p: bool) -> int:
    """Digit value from the transverse-read count and the P bit"""
    if not 0 <= count <= DIGIT_WIDTH:
        raise CounterStateError(f"transverse-read count {count} outside 0..{DIGIT_WIDTH}")
    if p and count == 0:
        raise CounterStateError("P set on an empty window is not a counter state")
    return RADIX - count if p else count


def decode_window(window: Sequence[int]) -> int:
    """Digit value of a window, rejecting non-Johnson patterns"""
    value = decode_digit(sum(window), bool(window[-1]))
    if list(window) != johnson_window(value):
        raise CounterStateError(f"window {tuple(window)} is not a Johnson state")
    return value


def _check_digit_geometry(geometry: DeviceGeometry):
    if geometry.trd != DIGIT_WIDTH:
        raise ContractError(f"counters need a transverse-read distance of {DIGIT_WIDTH}, not {geometry.trd}")


class RtmCounter(object):
    """Multi-digit counter whose digits are single nanowires, least significant first"""
    wires: List[Nanowire]
    saturating: bool

    def __init__(self, wires: Sequence[Nanowire], saturating: bool = False):
        if not wires:
            raise ContractError("a counter needs at least one digit")
        for wire in wires:
            _check_digit_geometry(wire.dbc.geometry)
            if not wire.dbc.independent_mode:
                raise ContractError("counter digits need a DBC in independent mode")
        self.wires = list(wires)
        self.saturating = saturating

    @classmethod
    def allocate(cls, capacity: int, saturating: bool = False) -> 'RtmCounter':
        """Counter on a private DBC holding just the digit windows"""
        digits = digits_required(capacity)
        geometry = DeviceGeometry(banks=1, subarrays_per_bank=1, tiles_per_subarray=1, dbcs_per_tile=1,
                                  tracks_per_dbc=digits, domains_per_track=DIGIT_WIDTH,
                                  ap_low=0, ap_high=DIGIT_WIDTH - 1, trd=DIGIT_WIDTH)
        dbc = Subarray(geometry).dbc(0, 0)
        dbc.set_independent(True)
        return cls([dbc.nanowire(t) for t in range(digits)], saturating)

    @property
    def digits(self) -> int:
        return len(self.wires)

    @property
    def capacity(self) -> int:
        return RADIX ** self.digits - 1

    def _locations(self, digit: int) -> np.ndarray:
        wire = self.wires[digit]
        return wire.dbc.window_locations()[:, wire.track]

    def window(self, digit: int) -> List[int]:
        """Bits of a digit between the ports, lower port first"""
        wire = self.wires[digit]
        g = wire.dbc.geometry
        bits = [wire.bit_at(g.ap_low + i) for i in range(g.trd)]
        if None in bits:
            raise AlignmentError(f"digit {digit} is not aligned between the ports")
        return bits

    def _store(self, digit: int, window: Sequence[int]):
        wire = self.wires[digit]
        wire.dbc.rows[self._locations(digit), wire.track] = window

    def decode(self) -> int:
        """Counter value as seen by the controller (no device access recorded)"""
        return sum(decode_window(self.window(i)) * RADIX ** i for i in range(self.digits))

    def increment(self, by: int = 1):
        """Applies ``by`` unit increments, one transverse write per digit update

        :param by: number of unit increments
        """
        if by < 0:
            raise ContractError(f"negative increment {by}")
        windows = [self.window(i) for i in range(self.digits)]
        value = sum(decode_window(w) * RADIX ** i for i, w in enumerate(windows))
        if self.saturating:
            steps = min(by, self.capacity - value)
        elif value + by > self.capacity:
            raise CounterOverflowError(f"counter at {value} cannot count {by} more (capacity {self.capacity})")
        else:
            steps = by

        writes = [0] * self.digits
        for _ in range(steps):
            digit = 0
            while True:
                old_p = windows[digit][-1]
                windows[digit], _ = transverse_write_window(windows[digit], 1 - old_p)
                writes[digit] += 1
                if not (old_p == 1 and windows[digit][-1] == 0):
                    break
                digit += 1

        for digit, window in enumerate(windows):
            if writes[digit]:
                self._store(digit, window)
                self.wires[digit].dbc.record(EventClass.TW, writes[digit], writes[digit])

    def preset(self, value: int):
        """Writes the Johnson encoding of ``value`` into every digit"""
        if not 0 <= value <= self.capacity:
            raise ContractError(f"preset {value} outside 0..{self.capacity}")
        for digit in range(self.digits):
            self._store(digit, johnson_window(value // RADIX ** digit % RADIX))
            self.wires[digit].dbc.record(EventClass.WRITE, DIGIT_WIDTH, 1)

    def threshold_hit(self) -> bool:
        """True once the counter reached its capacity"""
        return self.decode() == self.capacity

    def msd_p_bit(self) -> bool:
        """P bit of the most significant digit (diagnostic)"""
        return bool(self.window(self.digits - 1)[-1])

    def readout(self) -> int:
        """Reads the counter through the packed TR/P readout path

        Each DBC holding digits costs one transverse read and one read under
        the upper port.
        """
        sensed = OrderedDict()
        for wire in self.wires:
            if id(wire.dbc) not in sensed:
                sensed[id(wire.dbc)] = (wire.dbc.tr_read(), wire.dbc.read_row(Port.UPPER))
        counts = np.array([[sensed[id(w.dbc)][0][w.track] for w in self.wires]])
        p = np.array([[sensed[id(w.dbc)][1][w.track] for w in self.wires]])
        width = self.wires[0].dbc.geometry.tracks_per_dbc
        rows = pack_counter_readout(counts, p, max(width, READOUT_BITS * self.digits))
        counts, p = unpack_counter_readout(rows, 1, self.digits)
        return int(decode_counts(counts, p)[0])


class CounterBank(object):
    """Row-parallel counters: digit i of the counter on track t is track t of DBC i.

    All counters of the bank advance together under masked transverse writes.
    """
    dbcs: List[Dbc]
    saturating: bool

    def __init__(self, dbcs: Sequence[Dbc], saturating: bool = False):
        if not dbcs:
            raise ContractError("a counter bank needs at least one digit DBC")
        for dbc in dbcs:
            _check_digit_geometry(dbc.geometry)
            dbc.set_independent(True)
        self.dbcs = list(dbcs)
        self.saturating = saturating

    @property
    def digits(self) -> int:
        return len(self.dbcs)

    @property
    def capacity(self) -> int:
        return RADIX ** self.digits - 1

    @property
    def tracks(self) -> int:
        return self.dbcs[0].geometry.tracks_per_dbc

    def _at_capacity(self) -> np.ndarray:
        nine = np.array(johnson_window(RADIX - 1), dtype=np.uint8)[:, np.newaxis]
        res = np.ones(self.tracks, dtype=bool)
        for dbc in self.dbcs:
            res &= np.all(dbc.window() == nine, axis=0)
        return res

    def increment_masked(self, mask: np.ndarray):
        """One unit increment of every counter whose track is set in ``mask``"""
        carry = np.asarray(mask, dtype=bool).copy()
        if self.saturating:
            carry &= ~self._at_capacity()
        elif np.any(carry & self._at_capacity()):
            raise CounterOverflowError(f"counter bank overflow beyond {self.capacity}")
        for dbc in self.dbcs:
            if not carry.any():
                break
            window = dbc.window()
            old_p = window[-1]
            masked_transverse_write(dbc, carry, 1 - old_p)
            carry &= (old_p == 1) & (window[-2] == 0)

    def preset(self, values):
        """Presets every counter, one row write per window row and digit"""
        values = np.broadcast_to(np.asarray(values, dtype=np.int64), (self.tracks,))
        if np.any(values < 0) or np.any(values > self.capacity):
            raise ContractError(f"preset outside 0..{self.capacity}")
        patterns = np.array([johnson_window(v) for v in range(RADIX)], dtype=np.uint8)
        for i, dbc in enumerate(self.dbcs):
            dbc.write_window(patterns[values // RADIX ** i % RADIX].T)
            dbc.record(EventClass.WRITE, DIGIT_WIDTH * self.tracks, DIGIT_WIDTH)

    def decode(self) -> np.ndarray:
        """Counter values as seen by the controller (no device access recorded)"""
        counts = np.stack([dbc.window().sum(axis=0) for dbc in self.dbcs], axis=1)
        p = np.stack([dbc.window()[-1] for dbc in self.dbcs], axis=1)
        return decode_counts(counts, p)

    def readout(self) -> np.ndarray:
        """Reads every counter through the packed TR/P readout path

        :return: counter values per track
        """
        counts = np.stack([dbc.tr_read() for dbc in self.dbcs], axis=1)
        p = np.stack([dbc.read_row(Port.UPPER) for dbc in self.dbcs], axis=1)
        rows = pack_counter_readout(counts, p, self.tracks)
        logger.debug(f"counter readout: {self.tracks} counters in {len(rows)} rows")
        counts, p = unpack_counter_readout(rows, self.tracks, self.digits)
        return decode_counts(counts, p)

    def msd_p_bits(self) -> np.ndarray:
        """P bits of the most significant digits (diagnostic)"""
        return self.dbcs[-1].window()[-1].astype(bool)


def decode_counts(counts: np.ndarray, p: np.ndarray) -> np.ndarray:
    """Counter values from per-digit counts and P bits, both shaped (counters, digits)"""
    counts = np.asarray(counts, dtype=np.int64)
    p = np.asarray(p).astype(bool)
    if np.any(p & (counts == 0)) or np.any(counts > DIGIT_WIDTH):
        raise CounterStateError("readout holds a state outside the Johnson cycle")
    digits = np.where(p, RADIX - counts, counts)
    return digits @ (RADIX ** np.arange(counts.shape[1], dtype=np.int64))


def pack_counter_readout(counts: np.ndarray, p: np.ndarray, width: int) -> np.ndarray:
    """Packs TR flags and P bits into rows of ``width`` bits

    Every digit takes five threshold flags followed by its P bit, digits least
    significant first.  A row holds ``width // (6 * digits)`` counters, the
    tail of the last row is zero.

    :param counts: transverse-read counts, shape (counters, digits)
    :param p: P bits, shape (counters, digits)
    :param width: row width in bits
    :return: rows, shape (rows, width)
    """
    counts = np.asarray(counts)
    n, d = counts.shape
    per_row = width // (READOUT_BITS * d)
    if per_row == 0:
        raise ContractError(f"a {d}-digit counter does not fit a {width}-bit row")
    flags = counts[:, :, np.newaxis] > np.arange(DIGIT_WIDTH)
    bits = np.concatenate([flags, np.asarray(p, dtype=bool)[:, :, np.newaxis]], axis=2).reshape(n, -1)
    n_rows = math.ceil(n / per_row)
    buf = np.zeros((n_rows * per_row, READOUT_BITS * d), dtype=np.uint8)
    buf[:n] = bits
    rows = np.zeros((n_rows, width), dtype=np.uint8)
    rows[:, :per_row * READOUT_BITS * d] = buf.reshape(n_rows, -1)
    return rows


def unpack_counter_readout(rows: np.ndarray, n: int, digits: int) -> Tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`pack_counter_readout`

    :return: counts and P bits, both shaped (n, digits)
    """
    rows = np.asarray(rows)
    per_row = rows.shape[1] // (READOUT_BITS * digits)
    used = rows[:, :per_row * READOUT_BITS * digits].reshape(-1, digits, READOUT_BITS)[:n]
    flags = used[:, :, :DIGIT_WIDTH].astype(bool)
    if np.any(flags[:, :, 1:] & ~flags[:, :, :-1]):
        raise CounterStateError("threshold flags are not monotone")
    return flags.sum(axis=2), used[:, :, DIGIT_WIDTH].astype(np.uint8)
