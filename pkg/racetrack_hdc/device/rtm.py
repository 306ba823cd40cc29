# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Racetrack memory array: banks -> subarrays -> tiles -> DBCs -> nanowires.

Data never moves between locations of a DBC.  A shift changes the offset of
the data relative to the fixed access ports: with offset ``o`` the port at
domain index ``p`` sees location ``p - o``, and the bit of location ``l`` sits
at physical domain ``l + o``.  Overhead domains at the track ends are
abstracted away, so any alignment that keeps a location under one of the two
ports is valid.
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np

from .geometry import Address, DeviceGeometry, Port
from ..cost import EventClass, LedgerBook, Phase
from ..errors import AlignmentError, ContractError, ModeError

logger = logging.getLogger(__name__)

RowWord = np.ndarray  # uint8 vector of tracks_per_dbc bits


class Nanowire(object):
    """View of one track of a DBC"""

    def __init__(self, dbc: 'Dbc', track: int):
        if not 0 <= track < dbc.geometry.tracks_per_dbc:
            raise ContractError(f"track {track} outside DBC of {dbc.geometry.tracks_per_dbc} tracks")
        self.dbc = dbc
        self.track = track

    @property
    def domains(self) -> np.ndarray:
        """Bits of the addressable locations V0..V(K-1)"""
        return self.dbc.rows[:, self.track]

    @property
    def offset(self) -> int:
        return int(self.dbc.track_offsets()[self.track])

    def bit_at(self, position: int) -> Optional[int]:
        """Bit at physical domain ``position``, None if no location is there"""
        location = position - self.offset
        if 0 <= location < self.dbc.geometry.domains_per_track:
            return int(self.domains[location])
        return None


class Dbc(object):
    """Cluster of T nanowires storing K rows of T bits"""
    geometry: DeviceGeometry
    rows: np.ndarray
    independent_mode: bool

    def __init__(self, geometry: DeviceGeometry, owner: 'Subarray', independent: bool = False):
        self.geometry = geometry
        self.rows = np.zeros((geometry.domains_per_track, geometry.tracks_per_dbc), dtype=np.uint8)
        self.independent_mode = independent
        self._owner = owner
        self._offset = 0
        self._offsets = np.zeros(geometry.tracks_per_dbc, dtype=np.int64)

    def record(self, event: EventClass, bits: int, cycles: int):
        self._owner.record(event, bits, cycles)

    @property
    def shared_offset(self) -> int:
        if self.independent_mode:
            raise ModeError("DBC in independent mode has no shared offset")
        return self._offset

    def track_offsets(self) -> np.ndarray:
        if self.independent_mode:
            return self._offsets
        return np.full(self.geometry.tracks_per_dbc, self._offset, dtype=np.int64)

    def set_independent(self, independent: bool):
        """Switches between lock-step and per-track shifting"""
        if independent == self.independent_mode:
            return
        if independent:
            self._offsets = np.full(self.geometry.tracks_per_dbc, self._offset, dtype=np.int64)
        else:
            if np.any(self._offsets != self._offsets[0]):
                raise ModeError("tracks are not aligned, cannot return to lock-step mode")
            self._offset = int(self._offsets[0])
        self.independent_mode = independent

    def _valid_offset(self, offset) -> bool:
        g = self.geometry
        return -g.ap_high <= offset <= g.domains_per_track - 1 - g.ap_low

    def location_under(self, port: Port) -> int:
        """Location under ``port`` in lock-step mode, may lie outside the DBC"""
        return self.geometry.port_index(port) - self.shared_offset

    def shifts_to(self, location: int, port: Port) -> int:
        return abs(self.geometry.port_index(port) - location - self.shared_offset)

    def nearest_port(self, location: int) -> Port:
        """Port reaching ``location`` with the fewest shifts, ties go to the lower port"""
        if self.shifts_to(location, Port.UPPER) < self.shifts_to(location, Port.LOWER):
            return Port.UPPER
        return Port.LOWER

    def shift_to(self, location: int, port: Optional[Port] = None) -> int:
        """Aligns ``location`` to an access port

        :param location: target location V0..V(K-1)
        :param port: port to align to, the nearest one if None
        :return: number of single-position shifts taken
        """
        if self.independent_mode:
            raise ModeError("lock-step shift on a DBC in independent mode")
        if not 0 <= location < self.geometry.domains_per_track:
            raise AlignmentError(f"location {location} outside {self.geometry.domains_per_track} domains")
        if port is None:
            port = self.nearest_port(location)
        target = self.geometry.port_index(port) - location
        delta = abs(target - self._offset)
        if delta:
            self.record(EventClass.SHIFT, delta * self.geometry.tracks_per_dbc, delta)
            self._offset = target
        return delta

    def align(self, location: int) -> Port:
        """Shifts ``location`` under its nearest port and returns that port"""
        port = self.nearest_port(location)
        self.shift_to(location, port)
        return port

    def _port_locations(self, port: Port) -> np.ndarray:
        locations = self.geometry.port_index(port) - self.track_offsets()
        if np.any((locations < 0) | (locations >= self.geometry.domains_per_track)):
            raise AlignmentError(f"no location aligned to the {port.name.lower()} port")
        return locations

    def peek(self, port: Port) -> RowWord:
        """Row under ``port`` without recording an access (local logic, tests)"""
        locations = self._port_locations(port)
        if self.independent_mode:
            return self.rows[locations, np.arange(self.geometry.tracks_per_dbc)].copy()
        return self.rows[locations[0]].copy()

    def read_row(self, port: Port) -> RowWord:
        row = self.peek(port)
        self.record(EventClass.READ, self.geometry.tracks_per_dbc, 1)
        return row

    def write_row(self, port: Port, word: RowWord):
        word = np.asarray(word, dtype=np.uint8)
        if word.shape != (self.geometry.tracks_per_dbc,):
            raise ContractError(f"row of width {word.shape} written to {self.geometry.tracks_per_dbc} tracks")
        locations = self._port_locations(port)
        if self.independent_mode:
            self.rows[locations, np.arange(self.geometry.tracks_per_dbc)] = word
        else:
            self.rows[locations[0]] = word
        self.record(EventClass.WRITE, self.geometry.tracks_per_dbc, 1)

    def window_locations(self) -> np.ndarray:
        """Locations spanned by the ports, shape (trd, tracks)"""
        g = self.geometry
        low = g.ap_low - self.track_offsets()
        if np.any(low < 0) or np.any(low + g.trd > g.domains_per_track):
            raise AlignmentError("transverse-read window leaves the addressable range")
        # row 0 sits under the lower port, row trd-1 under the upper one
        return low[np.newaxis, :] + np.arange(g.trd)[:, np.newaxis]

    def window(self) -> np.ndarray:
        """Window bits, row i is i domains past the lower port, shape (trd, tracks)"""
        locations = self.window_locations()
        return self.rows[locations, np.arange(self.geometry.tracks_per_dbc)[np.newaxis, :]]

    def tr_read(self) -> np.ndarray:
        """Transverse read: per-track count of ones between the ports"""
        counts = self.window().sum(axis=0, dtype=np.int64)
        self.record(EventClass.TR, self.geometry.tracks_per_dbc, 1)
        return counts

    def shift_nanowire(self, track: int, delta: int):
        """Shifts a single track of a DBC in independent mode"""
        if not self.independent_mode:
            raise ModeError("per-track shift on a lock-step DBC")
        if not 0 <= track < self.geometry.tracks_per_dbc:
            raise ContractError(f"track {track} outside DBC")
        offset = int(self._offsets[track]) + delta
        if not self._valid_offset(offset):
            raise AlignmentError(f"offset {offset} of track {track} out of range")
        if delta:
            self._offsets[track] = offset
            self.record(EventClass.SHIFT, abs(delta), abs(delta))

    def write_window(self, window: np.ndarray):
        """Stores window bits back (used by transverse writes, no event recorded)"""
        locations = self.window_locations()
        self.rows[locations, np.arange(self.geometry.tracks_per_dbc)[np.newaxis, :]] = window

    def nanowire(self, track: int) -> Nanowire:
        return Nanowire(self, track)


class Subarray(object):
    """Single-writer unit owning the DBCs of its tiles and their ledger"""
    geometry: DeviceGeometry
    ledger: LedgerBook
    phase: Phase

    def __init__(self, geometry: DeviceGeometry, bank: int = 0, index: int = 0):
        self.geometry = geometry
        self.bank = bank
        self.index = index
        self.ledger = LedgerBook()
        self.phase = Phase.IO
        self._dbcs: Dict[Tuple[int, int], Dbc] = {}

    def record(self, event: EventClass, bits: int, cycles: int):
        self.ledger.record(self.phase, event, bits, cycles)

    def dbc(self, tile: int, index: int) -> Dbc:
        g = self.geometry
        if not (0 <= tile < g.tiles_per_subarray and 0 <= index < g.dbcs_per_tile):
            raise ContractError(f"DBC {tile}.{index} outside subarray")
        key = (tile, index)
        if key not in self._dbcs:
            self._dbcs[key] = Dbc(g, self)
        return self._dbcs[key]

    def cim_dbc(self, index: int) -> Dbc:
        """DBC of the cim-tile, the last tile of the subarray"""
        return self.dbc(self.geometry.tiles_per_subarray - 1, index)


class Device(object):
    """RTM array whose subarrays are allocated on first use"""
    geometry: DeviceGeometry

    def __init__(self, geometry: DeviceGeometry):
        self.geometry = geometry
        self._subarrays: Dict[Tuple[int, int], Subarray] = {}

    def subarray(self, bank: int, index: int) -> Subarray:
        g = self.geometry
        if not (0 <= bank < g.banks and 0 <= index < g.subarrays_per_bank):
            raise ContractError(f"subarray {bank}.{index} outside device")
        key = (bank, index)
        if key not in self._subarrays:
            self._subarrays[key] = Subarray(g, bank, index)
        return self._subarrays[key]

    def subarray_at(self, flat_index: int) -> Subarray:
        """Subarray by device-wide index, banks filled first to last"""
        if not 0 <= flat_index < self.geometry.subarrays:
            raise ContractError(f"subarray {flat_index} outside device of {self.geometry.subarrays}")
        return self.subarray(*divmod(flat_index, self.geometry.subarrays_per_bank))

    def dbc(self, address: Address) -> Dbc:
        address.check(self.geometry)
        return self.subarray(address.bank, address.subarray).dbc(address.tile, address.dbc)

    def set_phase(self, phase: Phase):
        for subarray in self._subarrays.values():
            subarray.phase = phase

    def ledger(self) -> LedgerBook:
        """Sum of the events recorded by all subarrays"""
        res = LedgerBook()
        for subarray in self._subarrays.values():
            res = res.merge(subarray.ledger)
        return res
