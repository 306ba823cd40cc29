# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Micro-op traces executed against a fresh device.

One instruction per line, ``#`` starts a comment::

    WRITE b.s.t.d loc zeros|ones|HEX
    CIMOP b.s.t.d loc size READ|ROT_LEFT|ROT_RIGHT|AND|OR|XOR

HEX holds T/4 digits, track 0 is the most significant bit of the first digit.
"""

import logging
from typing import Iterable, List, NamedTuple, Optional

import numpy as np

from .device.geometry import Address, DeviceGeometry
from .device.periphery import CimOpKind, CimRequest, cimop
from .device.rtm import Device
from .errors import InputError, PreconditionError

logger = logging.getLogger(__name__)


class TraceOp(NamedTuple):
    line: int
    kind: str
    address: Address
    row: Optional[np.ndarray] = None
    size: int = 0
    op: Optional[CimOpKind] = None


class TraceResult(NamedTuple):
    op: TraceOp
    row: np.ndarray


def row_from_hex(text: str, width: int) -> np.ndarray:
    if len(text) * 4 != width:
        raise InputError(f"row '{text}' has {len(text) * 4} bits, expected {width}")
    try:
        data = bytes.fromhex(text)
    except ValueError:
        raise InputError(f"row '{text}' is not hexadecimal") from None
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))


def row_to_hex(row: np.ndarray) -> str:
    return np.packbits(np.asarray(row, dtype=np.uint8)).tobytes().hex()


def __parse_row(text: str, width: int) -> np.ndarray:
    if text == 'zeros':
        return np.zeros(width, dtype=np.uint8)
    if text == 'ones':
        return np.ones(width, dtype=np.uint8)
    return row_from_hex(text, width)


def __parse_line(number: int, fields: List[str], width: int) -> TraceOp:
    kind = fields[0].upper()
    if kind == 'WRITE':
        if len(fields) != 4:
            raise InputError("WRITE takes an address, a location and a row")
        return TraceOp(number, kind, Address.parse(fields[1], fields[2]), row=__parse_row(fields[3], width))
    if kind == 'CIMOP':
        if len(fields) != 5:
            raise InputError("CIMOP takes an address, a location, a size and an operation")
        try:
            size = int(fields[3])
        except ValueError:
            raise InputError(f"size '{fields[3]}' is not an integer") from None
        try:
            op = CimOpKind.parse(fields[4])
        except PreconditionError as e:
            raise InputError(str(e)) from None
        return TraceOp(number, kind, Address.parse(fields[1], fields[2]), size=size, op=op)
    raise InputError(f"unknown instruction '{fields[0]}'")


def parse_trace(lines: Iterable[str], geometry: DeviceGeometry) -> List[TraceOp]:
    """Parses trace lines

    :param lines: trace text lines
    :param geometry: device geometry, fixes the row width
    :return: instructions in order
    """
    ops = []
    for number, line in enumerate(lines, start=1):
        fields = line.split('#', 1)[0].split()
        if not fields:
            continue
        try:
            ops.append(__parse_line(number, fields, geometry.tracks_per_dbc))
        except InputError as e:
            raise InputError(f"line {number}: {e}") from None
    return ops


def load_trace(path: str, geometry: DeviceGeometry) -> List[TraceOp]:
    try:
        with open(path) as f:
            return parse_trace(f.readlines(), geometry)
    except OSError as e:
        raise InputError(f"cannot read trace {path}: {e}") from None


def run_trace(ops: Iterable[TraceOp], device: Device) -> List[TraceResult]:
    """Executes ``ops`` in order, events land in the IO phase of each subarray"""
    results = []
    for op in ops:
        dbc = device.dbc(op.address)
        if op.kind == 'WRITE':
            dbc.write_row(dbc.align(op.address.location), op.row)
            row = op.row
        else:
            row = cimop(device, CimRequest(op.address, op.size, op.op))
        logger.debug(f"line {op.line}: {op.kind} {op.address} -> {row_to_hex(row)}")
        results.append(TraceResult(op, row))
    return results
