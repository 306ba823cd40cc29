# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Placement of hypervectors, encoder slots and counters in the cim-tiles.

Every subarray of a processing group (PG) holds one 512-bit chunk of each
hypervector.  The 16 DBCs of its cim-tile have fixed roles::

    DBC 0-8    item memory (+ associative memory in spare rows)
    DBC 9      encoder window
    DBC 10-15  bundling counter digits, least significant first

Similarity-search subarrays follow all PG subarrays, one per class.
"""

import logging
import math
from enum import Enum
from typing import Dict, List, Mapping, Tuple

from ..device.counter import digits_required
from ..device.geometry import DeviceGeometry
from ..errors import CapacityError, ConfigError, PreconditionError
from ..hdc.reference import ALPHABET

logger = logging.getLogger(__name__)

IM_DBCS = 9
ENCODER_DBC = 9
COUNTER_DBCS = tuple(range(10, 16))
RESULT_DBC = 14
DISTANCE_DBC = 15


class BundlingMode(Enum):
    EXACT_SUM = "exact-sum"
    PRESET = "preset"
    MAJORITY = "majority"


class ImPlacement(object):
    """Item-memory slot and frequency rank of every symbol"""
    slots: Dict[str, Tuple[int, int]]
    ranks: Dict[str, int]

    def __init__(self, slots: Mapping[str, Tuple[int, int]], ranks: Mapping[str, int]):
        self.slots = dict(slots)
        self.ranks = dict(ranks)

    def fetch_shifts(self, geometry: DeviceGeometry) -> Dict[str, int]:
        """Shifts needed to fetch each symbol from the home alignment"""
        ports = (geometry.ap_low, geometry.ap_high)
        return {s: min(abs(p - loc) for p in ports) for s, (_, loc) in self.slots.items()}

    def used_locations(self, dbc: int) -> List[int]:
        return sorted(loc for d, loc in self.slots.values() if d == dbc)

    def to_dict(self) -> Dict[str, list]:
        return {s: [d, loc, self.ranks[s]] for s, (d, loc) in self.slots.items()}

    @classmethod
    def from_dict(cls, d: Mapping[str, list]) -> 'ImPlacement':
        try:
            return cls({s: (int(v[0]), int(v[1])) for s, v in d.items()}, {s: int(v[2]) for s, v in d.items()})
        except (TypeError, ValueError, IndexError):
            raise ConfigError("malformed item-memory placement") from None

    def __eq__(self, other):
        return isinstance(other, ImPlacement) and self.slots == other.slots and self.ranks == other.ranks


def plan_placement(frequencies: Mapping[str, int], geometry: DeviceGeometry) -> ImPlacement:
    """Frequent symbols go under the ports, the others one domain below the lower port

    :param frequencies: occurrences of every alphabet symbol
    :param geometry: device geometry
    :return: placement, ties ranked in alphabet order
    """
    missing = [s for s in ALPHABET if s not in frequencies]
    if missing:
        raise PreconditionError(f"frequency table lacks symbols {missing!r}")
    if geometry.ap_low < 1:
        raise CapacityError("no domain below the lower port for the item memory")
    order = sorted(ALPHABET, key=lambda s: (-frequencies[s], ALPHABET.index(s)))
    under_ports = 2 * IM_DBCS
    slots = {}
    for rank, symbol in enumerate(order):
        if rank < under_ports:
            slots[symbol] = (rank // 2, geometry.ap_low if rank % 2 == 0 else geometry.ap_high)
        else:
            slots[symbol] = (rank - under_ports, geometry.ap_low - 1)
    logger.info(f"item memory placement, under the ports: {''.join(order[:under_ports])!r}")
    return ImPlacement(slots, {s: r for r, s in enumerate(order)})


def am_slots(labels: int, placement: ImPlacement, geometry: DeviceGeometry) -> List[Tuple[int, int]]:
    """Spare item-memory rows holding class vectors, class i in DBC i mod 9"""
    free = {d: [loc for loc in range(geometry.domains_per_track) if loc not in placement.used_locations(d)]
            for d in range(IM_DBCS)}
    slots = []
    for i in range(labels):
        dbc = i % IM_DBCS
        if not free[dbc]:
            raise CapacityError(f"no spare item-memory row for class {i}")
        slots.append((dbc, free[dbc].pop(0)))
    return slots


class PgLayout(object):
    """Subarray assignment of processing groups and similarity-search classes"""
    geometry: DeviceGeometry
    dim: int
    num_pgs: int

    def __init__(self, geometry: DeviceGeometry, dim: int, num_pgs: int):
        if dim % geometry.tracks_per_dbc:
            raise ConfigError(f"dimension {dim} is not a multiple of {geometry.tracks_per_dbc} tracks")
        if num_pgs < 1:
            raise ConfigError(f"at least one processing group needed, got {num_pgs}")
        if geometry.dbcs_per_tile < COUNTER_DBCS[-1] + 1:
            raise ConfigError(f"cim-tile needs {COUNTER_DBCS[-1] + 1} DBCs, geometry has {geometry.dbcs_per_tile}")
        self.geometry = geometry
        self.dim = dim
        self.num_pgs = num_pgs
        if self.pg_subarrays > geometry.subarrays:
            raise CapacityError(f"{num_pgs} processing groups of {self.chunks} subarrays exceed "
                                f"{geometry.subarrays} subarrays")

    @property
    def chunks(self) -> int:
        """Subarrays per processing group"""
        return self.dim // self.geometry.tracks_per_dbc

    @property
    def pg_subarrays(self) -> int:
        return self.num_pgs * self.chunks

    def pg_subarray(self, pg: int, chunk: int) -> int:
        return pg * self.chunks + chunk

    def class_subarray(self, index: int) -> int:
        flat = self.pg_subarrays + index
        if flat >= self.geometry.subarrays:
            raise CapacityError(f"class {index} does not fit: {self.geometry.subarrays} subarrays, "
                                f"{self.pg_subarrays} taken by processing groups")
        return flat


class SearchSlots(object):
    """Locations used by the similarity search inside a class subarray.

    Class chunk j and the query chunk j share DBC j // 2: even chunks at the
    two rows starting one window below the lower port, odd chunks at the lower
    port.  XOR results fill DBC 14 from ``result_base``, the distance counter
    uses the first tracks of DBC 15.
    """

    def __init__(self, geometry: DeviceGeometry, chunks: int):
        trd = geometry.trd
        if geometry.ap_low < trd or geometry.ap_low + trd > geometry.domains_per_track:
            raise CapacityError("class subarray needs a full window below and at the lower port")
        if math.ceil(chunks / 2) > RESULT_DBC:
            raise CapacityError(f"{chunks} chunks do not fit the operand DBCs of a class subarray")
        self.trd = trd
        self.chunks = chunks
        self.result_base = geometry.ap_low % trd
        self.windows = math.ceil(chunks / trd)
        if self.result_base + self.windows * trd > geometry.domains_per_track:
            raise CapacityError(f"{chunks} XOR results do not fit DBC {RESULT_DBC}")
        self.digits = digits_required(chunks * geometry.tracks_per_dbc)
        if self.digits > geometry.tracks_per_dbc:
            raise CapacityError("distance counter wider than a DBC")
        self._even = geometry.ap_low - trd
        self._odd = geometry.ap_low

    def class_slot(self, chunk: int) -> Tuple[int, int]:
        return chunk // 2, self._even if chunk % 2 == 0 else self._odd

    def query_slot(self, chunk: int) -> Tuple[int, int]:
        dbc, loc = self.class_slot(chunk)
        return dbc, loc + 1

    def result_location(self, chunk: int) -> int:
        return self.result_base + chunk

    def window_location(self, index: int) -> int:
        return self.result_base + index * self.trd
