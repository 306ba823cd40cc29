# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Run configuration: geometry, energy parameters, HDC and engine settings.

A configuration document is JSON with the optional sections ``geometry``,
``energy``, ``hdc`` and ``engine``.  Missing fields take the defaults of the
evaluated system.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Mapping

from schema import And, Optional, Schema, SchemaError, Use  # type:ignore

from .cost import EnergyParams
from .device.geometry import DeviceGeometry
from .engine.layout import BundlingMode
from .errors import ConfigError, InputError
from .hdc.reference import EncodeParams

_positive = And(Use(int), lambda v: v > 0)

hdc_schema = Schema({
    Optional('dim'): _positive,
    Optional('ngram'): _positive,
    Optional('seed'): And(Use(int), lambda v: 0 <= v < 2 ** 64),
})

engine_schema = Schema({
    Optional('pgs'): _positive,
    Optional('mode'): And(str, Use(BundlingMode)),
})

config_schema = Schema({
    Optional('geometry'): dict,
    Optional('energy'): dict,
    Optional('hdc'): hdc_schema,
    Optional('engine'): engine_schema,
})


@dataclass(frozen=True)
class RunConfig:
    geometry: DeviceGeometry = field(default_factory=DeviceGeometry)
    energy: EnergyParams = field(default_factory=EnergyParams)
    dim: int = 8192
    ngram: int = 4
    seed: int = 0
    pgs: int = 1
    mode: BundlingMode = BundlingMode.EXACT_SUM

    def __post_init__(self):
        EncodeParams(self.dim, self.ngram, self.seed)
        if self.dim % self.geometry.tracks_per_dbc:
            raise ConfigError(f"dimension {self.dim} is not a multiple of {self.geometry.tracks_per_dbc} tracks")
        if self.ngram > self.geometry.trd:
            raise ConfigError(f"n-gram length {self.ngram} exceeds the transverse-read distance {self.geometry.trd}")
        if self.pgs < 1:
            raise ConfigError(f"at least one processing group needed, got {self.pgs}")
        if not isinstance(self.mode, BundlingMode):
            raise ConfigError(f"unknown bundling mode {self.mode!r}")
        if self.geometry.clock_hz != self.energy.clock_hz:
            raise ConfigError(f"device clock {self.geometry.clock_hz} Hz differs from the energy model's "
                              f"{self.energy.clock_hz} Hz")

    @property
    def encode_params(self) -> EncodeParams:
        return EncodeParams(self.dim, self.ngram, self.seed)

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> 'RunConfig':
        try:
            doc = config_schema.validate(dict(doc))
        except SchemaError as e:
            raise ConfigError(f"invalid configuration: {e}") from None
        geometry = DeviceGeometry.from_dict(doc.get('geometry', {}))
        # the energy model runs at the device clock unless it names its own
        energy = EnergyParams.from_dict({'clock_hz': geometry.clock_hz, **doc.get('energy', {})})
        return cls(geometry=geometry, energy=energy, **doc.get('hdc', {}), **doc.get('engine', {}))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'geometry': self.geometry.to_dict(),
            'energy': asdict(self.energy),
            'hdc': {'dim': self.dim, 'ngram': self.ngram, 'seed': self.seed},
            'engine': {'pgs': self.pgs, 'mode': self.mode.value},
        }

    def override(self, **values) -> 'RunConfig':
        """Copy with the given non-None top-level fields replaced"""
        values = {k: v for k, v in values.items() if v is not None}
        if 'mode' in values:
            try:
                values['mode'] = BundlingMode(values['mode'])
            except ValueError:
                raise ConfigError(f"unknown bundling mode '{values['mode']}'") from None
        return replace(self, **values)

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(',', ':'))

    @property
    def hash(self) -> str:
        """SHA-256 over the canonical JSON of the resolved configuration"""
        return hashlib.sha256(self.canonical_json().encode('utf-8')).hexdigest()

    def echo(self) -> Dict[str, Any]:
        return {**self.to_dict(), 'hash': self.hash}


def load_config(path: str) -> RunConfig:
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as e:
        raise InputError(f"cannot read configuration {path}: {e}") from None
    except ValueError as e:
        raise ConfigError(f"configuration {path} is not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ConfigError(f"configuration {path} must hold a JSON object")
    return RunConfig.from_dict(doc)
