# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Sense-amplifier thresholds, the CIM logic block and the cimop dispatch."""

import logging
from enum import Enum
from typing import NamedTuple, Tuple, Union

import numpy as np

from .geometry import Address, Port
from .rtm import Dbc, Device, RowWord
from ..cost import EventClass
from ..errors import AlignmentError, ContractError, ModeError

logger = logging.getLogger(__name__)


class ThresholdFlags(NamedTuple):
    """Reference thresholds exceeded by a transverse read, ``tij`` means at least j ones"""
    t01: bool
    t12: bool
    t23: bool
    t34: bool
    t45: bool

    @property
    def count(self) -> int:
        return sum(self)


def flags_from_count(count: int) -> ThresholdFlags:
    if not 0 <= count <= len(ThresholdFlags._fields):
        raise ContractError(f"transverse-read count {count} outside 0..{len(ThresholdFlags._fields)}")
    return ThresholdFlags(*(count > i for i in range(len(ThresholdFlags._fields))))


class CimLogic(NamedTuple):
    and_: bool
    or_: bool
    xor: bool


def cim_logic(flags: ThresholdFlags, size: int) -> CimLogic:
    """Gate-level evaluation of the logic block for one bit line

    :param flags: sense-amplifier outputs
    :param size: operand count, the rows beyond it are virtual zero padding
    :return: AND, OR and XOR of the operand column
    """
    xor = (flags.t01 and not flags.t12) or (flags.t23 and not flags.t34) or flags.t45
    return CimLogic(and_=flags.count == size, or_=flags.t01, xor=bool(xor))


class CimOpKind(Enum):
    """Operations selected by the output multiplexer, slots 6 and 7 are reserved"""
    READ = 0
    ROT_LEFT = 1
    ROT_RIGHT = 2
    AND = 3
    OR = 4
    XOR = 5

    @classmethod
    def parse(cls, name: str) -> 'CimOpKind':
        try:
            return cls[name.upper()]
        except KeyError:
            raise ContractError(f"unknown cim operation '{name}'") from None


class CimRequest(NamedTuple):
    src: Address
    size: int
    op: CimOpKind


def logic_row(counts: np.ndarray, size: int, op: CimOpKind) -> RowWord:
    """Row-wide logic block over transverse-read counts"""
    if op is CimOpKind.AND:
        res = counts == size
    elif op is CimOpKind.OR:
        res = counts >= 1
    elif op is CimOpKind.XOR:
        res = (counts & 1) == 1
    else:
        raise ContractError(f"{op.name} is not a logic operation")
    return res.astype(np.uint8)


class Rotation(Enum):
    LEFT = 1
    RIGHT = -1


def rotate_read(dbc: Dbc, port: Port, direction: Rotation) -> RowWord:
    """Reads the row under ``port`` through the rotating row-buffer path.

    Left moves bit i to bit i+1, the last track wraps to bit 0.
    """
    return np.roll(dbc.read_row(port), direction.value)


def cimop(device: Device, request: CimRequest) -> RowWord:
    """Executes one cimop instruction

    Logic operations align ``src`` under the lower port and sense the whole
    transverse-read window.  At most ``size`` of its rows may be non-zero, the
    clear ones act as padding wherever they sit.

    :param device: target device
    :param request: source address, operand count and operation
    :return: result row, left in the row buffer
    """
    trd = device.geometry.trd
    if not 1 <= request.size <= trd:
        raise ContractError(f"cimop size {request.size} outside 1..{trd}")
    dbc = device.dbc(request.src)
    location = request.src.location

    if request.op is CimOpKind.READ:
        return dbc.read_row(dbc.align(location))
    if request.op in (CimOpKind.ROT_LEFT, CimOpKind.ROT_RIGHT):
        direction = Rotation.LEFT if request.op is CimOpKind.ROT_LEFT else Rotation.RIGHT
        return rotate_read(dbc, dbc.align(location), direction)

    if location + trd > device.geometry.domains_per_track:
        raise AlignmentError(f"cimop window at {location} leaves the {device.geometry.domains_per_track} domains")
    dbc.shift_to(location, Port.LOWER)
    occupied = int(np.count_nonzero(dbc.window().any(axis=1)))
    if occupied > request.size:
        raise ContractError(f"cimop at {request.src}: {occupied} window rows hold data, size {request.size}")
    counts = dbc.tr_read()
    return logic_row(counts, request.size, request.op)


def transverse_write_window(window, bit: int) -> Tuple[list, int]:
    """Pure shift-register step: ``bit`` enters under the lower port

    :return: new window and the bit that left from under the upper port
    """
    window = list(window)
    return [int(bit)] + window[:-1], window[-1]


def transverse_write(dbc: Dbc, track: int, bit: int) -> int:
    """Transverse write on one nanowire of an independent DBC

    :return: the dropped bit
    """
    if not dbc.independent_mode:
        raise ModeError("transverse write on a single track of a lock-step DBC")
    if not 0 <= track < dbc.geometry.tracks_per_dbc:
        raise ContractError(f"track {track} outside DBC")
    locations = dbc.window_locations()[:, track]
    column = dbc.rows[locations, track]
    dropped = int(column[-1])
    dbc.rows[locations[1:], track] = column[:-1]
    dbc.rows[locations[0], track] = bit
    dbc.record(EventClass.TW, 1, 1)
    return dropped


def masked_transverse_write(dbc: Dbc, mask: np.ndarray, bits: Union[int, np.ndarray]) -> np.ndarray:
    """Transverse write on the masked tracks of a DBC in one cycle

    :param dbc: target DBC
    :param mask: tracks to write
    :param bits: bit per track (or one bit for all) pushed under the lower port
    :return: bits dropped from under the upper port, zero on untouched tracks
    """
    mask = np.asarray(mask, dtype=bool)
    written = int(np.count_nonzero(mask))
    if not written:
        return np.zeros(dbc.geometry.tracks_per_dbc, dtype=np.uint8)
    window = dbc.window()
    dropped = np.where(mask, window[-1], 0).astype(np.uint8)
    shifted = np.empty_like(window)
    shifted[1:] = window[:-1]
    shifted[0] = np.broadcast_to(np.asarray(bits, dtype=np.uint8), mask.shape)
    dbc.write_window(np.where(mask[np.newaxis, :], shifted, window))
    dbc.record(EventClass.TW, written, 1)
    return dropped
