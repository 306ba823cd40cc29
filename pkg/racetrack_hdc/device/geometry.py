# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

from dataclasses import dataclass, asdict, fields
from enum import Enum
from typing import Any, Dict, NamedTuple

from schema import Schema, And, Use, SchemaError  # type:ignore

from ..errors import ConfigError, ContractError, InputError

_positive = And(Use(int), lambda v: v > 0)

geometry_schema = Schema({
    'banks': _positive,
    'subarrays_per_bank': _positive,
    'tiles_per_subarray': _positive,
    'dbcs_per_tile': _positive,
    'tracks_per_dbc': _positive,
    'domains_per_track': _positive,
    'ap_low': And(Use(int), lambda v: v >= 0),
    'ap_high': And(Use(int), lambda v: v >= 0),
    'trd': _positive,
    'clock_hz': And(Use(float), lambda v: v > 0),
})


class Port(Enum):
    """Access port selector. LOWER is AP1 (transverse writes), UPPER is AP2 (P bit)"""
    LOWER = 0
    UPPER = 1


@dataclass(frozen=True)
class DeviceGeometry:
    """Array hierarchy banks -> subarrays -> tiles -> DBCs -> nanowires.

    Defaults describe the evaluated 8GB system: 32 banks of 64 subarrays, 16
    tiles of 16 DBCs, 512 tracks of 32 domains, ports 5 domains apart.
    """
    banks: int = 32
    subarrays_per_bank: int = 64
    tiles_per_subarray: int = 16
    dbcs_per_tile: int = 16
    tracks_per_dbc: int = 512
    domains_per_track: int = 32
    ap_low: int = 13
    ap_high: int = 17
    trd: int = 5
    clock_hz: float = 1e9

    def __post_init__(self):
        try:
            geometry_schema.validate(asdict(self))
        except SchemaError as e:
            raise ConfigError(f"invalid geometry: {e}") from None
        if self.ap_high - self.ap_low + 1 != self.trd:
            raise ConfigError(f"access ports {self.ap_low}..{self.ap_high} do not span trd={self.trd}")
        if self.ap_high >= self.domains_per_track:
            raise ConfigError(f"access port {self.ap_high} outside {self.domains_per_track} domains")

    @property
    def subarrays(self) -> int:
        return self.banks * self.subarrays_per_bank

    def port_index(self, port: Port) -> int:
        return self.ap_low if port is Port.LOWER else self.ap_high

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> 'DeviceGeometry':
        unknown = set(d) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"unknown geometry fields: {', '.join(sorted(unknown))}")
        try:
            return cls(**geometry_schema.validate({**asdict(cls()), **d}))
        except SchemaError as e:
            raise ConfigError(f"invalid geometry: {e}") from None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class Address(NamedTuple):
    bank: int
    subarray: int
    tile: int
    dbc: int
    location: int

    def check(self, geometry: DeviceGeometry):
        bounds = (geometry.banks, geometry.subarrays_per_bank, geometry.tiles_per_subarray,
                  geometry.dbcs_per_tile, geometry.domains_per_track)
        for name, value, bound in zip(self._fields, self, bounds):
            if not 0 <= value < bound:
                raise ContractError(f"address {name}={value} outside [0, {bound})")

    @classmethod
    def parse(cls, dbc_path: str, location: str) -> 'Address':
        """Parses ``bank.sub.tile.dbc`` and a location index"""
        parts = dbc_path.split('.')
        if len(parts) != 4:
            raise InputError(f"malformed DBC address '{dbc_path}', expected bank.sub.tile.dbc")
        try:
            return cls(*(int(p) for p in parts), int(location))
        except ValueError:
            raise InputError(f"malformed address '{dbc_path} {location}'") from None

    def __str__(self):
        return f'{self.bank}.{self.subarray}.{self.tile}.{self.dbc}@{self.location}'
