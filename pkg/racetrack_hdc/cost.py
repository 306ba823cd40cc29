# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Event ledger and energy/latency computation.

Every device primitive records the number of bits it touched per event class
together with the cycles it took.  Energy is the sum of bits times the per-bit
energy of their class plus the background power over the busy cycles.
"""

from dataclasses import dataclass, asdict, fields
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional

from schema import Schema, And, Use, SchemaError  # type:ignore

from .errors import ConfigError


class EventClass(Enum):
    SHIFT = "shift"
    READ = "read"
    WRITE = "write"
    TR = "tr"
    TW = "tw"


class Phase(Enum):
    ENCODE = "encode"
    BUNDLE = "bundle"
    SEARCH = "search"
    IO = "io"


_non_negative = And(Use(float), lambda v: v >= 0)

energy_schema = Schema({
    'read_pj_per_bit': _non_negative,
    'shift_pj_per_bit': _non_negative,
    'write_pj_per_bit': _non_negative,
    'tr_pj_per_bit': _non_negative,
    'tw_pj_per_bit': _non_negative,
    'background_mw': _non_negative,
    'clock_hz': And(Use(float), lambda v: v > 0),
})


@dataclass(frozen=True)
class EnergyParams:
    """Per-bit energies in pJ, background power in mW.

    Write, TR and TW energies are not published for the device; the defaults
    assume write = read, TR = read and TW = shift + write.
    """
    read_pj_per_bit: float = 0.5
    shift_pj_per_bit: float = 0.3
    write_pj_per_bit: float = 0.5
    tr_pj_per_bit: float = 0.5
    tw_pj_per_bit: float = 0.3 + 0.5
    background_mw: float = 212.0
    clock_hz: float = 1e9

    def __post_init__(self):
        try:
            energy_schema.validate(asdict(self))
        except SchemaError as e:
            raise ConfigError(f"invalid energy parameters: {e}") from None

    @classmethod
    def from_dict(cls, d: Mapping[str, float]) -> 'EnergyParams':
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown energy parameters: {', '.join(sorted(unknown))}")
        try:
            return cls(**energy_schema.validate({**asdict(cls()), **d}))
        except SchemaError as e:
            raise ConfigError(f"invalid energy parameters: {e}") from None

    def pj_per_bit(self, event: EventClass) -> float:
        return getattr(self, f'{event.value}_pj_per_bit')


class CostLedger(object):
    """Bit-event counts and elapsed cycles of one phase"""
    shift_bits: int
    read_bits: int
    write_bits: int
    tr_bits: int
    tw_bits: int
    cycles: int

    __slots__ = ('shift_bits', 'read_bits', 'write_bits', 'tr_bits', 'tw_bits', 'cycles')

    def __init__(self, shift_bits: int = 0, read_bits: int = 0, write_bits: int = 0,
                 tr_bits: int = 0, tw_bits: int = 0, cycles: int = 0):
        self.shift_bits = shift_bits
        self.read_bits = read_bits
        self.write_bits = write_bits
        self.tr_bits = tr_bits
        self.tw_bits = tw_bits
        self.cycles = cycles

    def record(self, event: EventClass, bits: int, cycles: int):
        """Counts an event

        :param event: event class
        :param bits: number of bits touched
        :param cycles: latency of the event
        """
        if bits < 0 or cycles < 0:
            raise ValueError(f"negative cost recorded: {bits} bits, {cycles} cycles")
        attr = f'{event.value}_bits'
        setattr(self, attr, getattr(self, attr) + int(bits))
        self.cycles += int(cycles)

    def bits(self, event: EventClass) -> int:
        return getattr(self, f'{event.value}_bits')

    def merge(self, other: 'CostLedger') -> 'CostLedger':
        """Field-wise sum, the composition of sequential work"""
        return CostLedger(*(getattr(self, k) + getattr(other, k) for k in self.__slots__))

    __add__ = merge

    @staticmethod
    def parallel(ledgers: Iterable['CostLedger']) -> 'CostLedger':
        """Composition of concurrent work: bits add up, cycles overlap

        :param ledgers: ledgers of independent devices
        :return: ledger with summed bits and the maximum cycle count
        """
        res = CostLedger()
        for ledger in ledgers:
            res = CostLedger(*(getattr(res, k) + getattr(ledger, k) for k in CostLedger.__slots__[:-1]),
                             cycles=max(res.cycles, ledger.cycles))
        return res

    def is_empty(self) -> bool:
        return not any(getattr(self, k) for k in self.__slots__)

    def as_dict(self) -> Dict[str, int]:
        return {k: getattr(self, k) for k in self.__slots__}

    def __eq__(self, other):
        return isinstance(other, CostLedger) and self.as_dict() == other.as_dict()

    def __repr__(self):
        return f'CostLedger({", ".join(f"{k}={v}" for k, v in self.as_dict().items())})'


class LedgerBook(object):
    """Per-phase ledgers of one single-writer device (or of a reduction)"""
    phases: Dict[Phase, CostLedger]

    def __init__(self, phases: Optional[Mapping[Phase, CostLedger]] = None):
        self.phases = {p: CostLedger() for p in Phase}
        for phase, ledger in (phases or {}).items():
            self.phases[phase] = self.phases[phase].merge(ledger)

    def record(self, phase: Phase, event: EventClass, bits: int, cycles: int):
        self.phases[phase].record(event, bits, cycles)

    def __getitem__(self, phase: Phase) -> CostLedger:
        return self.phases[phase]

    def total(self) -> CostLedger:
        res = CostLedger()
        for ledger in self.phases.values():
            res = res.merge(ledger)
        return res

    def merge(self, other: 'LedgerBook') -> 'LedgerBook':
        return LedgerBook({p: self.phases[p].merge(other.phases[p]) for p in Phase})

    __add__ = merge

    @staticmethod
    def parallel(books: Iterable['LedgerBook']) -> 'LedgerBook':
        books = list(books)
        return LedgerBook({p: CostLedger.parallel(b.phases[p] for b in books) for p in Phase})

    def drain(self) -> 'LedgerBook':
        """Returns the accumulated events and resets this book"""
        res = LedgerBook(self.phases)
        self.phases = {p: CostLedger() for p in Phase}
        return res

    def __eq__(self, other):
        return isinstance(other, LedgerBook) and self.phases == other.phases


def dynamic_energy(ledger: CostLedger, params: EnergyParams) -> float:
    """Dynamic energy in nJ"""
    return sum(ledger.bits(e) * params.pj_per_bit(e) for e in EventClass) / 1000.0


def background_energy(ledger: CostLedger, params: EnergyParams) -> float:
    """Background energy in nJ over the busy cycles"""
    # mW * s = mJ = 1e6 nJ
    return params.background_mw * ledger.cycles / params.clock_hz * 1e6


def energy(ledger: CostLedger, params: EnergyParams) -> float:
    """Total energy of the ledger in nJ"""
    return dynamic_energy(ledger, params) + background_energy(ledger, params)


def latency_ns(ledger: CostLedger, params: EnergyParams) -> float:
    return ledger.cycles / params.clock_hz * 1e9


class PhaseReport(object):
    phase: str
    dynamic_nj: float
    background_nj: float
    energy_nj: float
    cycles: float
    runtime_ns: float
    events: Dict[str, float]

    def __init__(self, phase: Phase, ledger: CostLedger, params: EnergyParams, per: int = 1):
        self.phase = phase.value
        self.dynamic_nj = dynamic_energy(ledger, params) / per
        self.background_nj = background_energy(ledger, params) / per
        self.energy_nj = self.dynamic_nj + self.background_nj
        self.cycles = ledger.cycles / per
        self.runtime_ns = latency_ns(ledger, params) / per
        self.events = {f'{e.value}_bits': ledger.bits(e) / per for e in EventClass}


class Report(object):
    """Energy and latency report over disjoint phases.

    ``encoder_nj`` covers encoding and bundling, ``simcheck_nj`` the similarity
    search; item-memory and model transfers are reported as ``io_nj``.
    """
    encoder_nj: float
    simcheck_nj: float
    io_nj: float
    total_nj: float
    dynamic_nj: float
    background_nj: float
    cycles: float
    runtime_ns: float
    queries: int
    phases: Dict[str, PhaseReport]
    params_echo: Dict[str, float]

    def __init__(self, phases: Mapping[Phase, CostLedger], params: EnergyParams, per: int = 1):
        self.phases = {p.value: PhaseReport(p, phases.get(p, CostLedger()), params, per) for p in Phase}
        self.encoder_nj = self.phases['encode'].energy_nj + self.phases['bundle'].energy_nj
        self.simcheck_nj = self.phases['search'].energy_nj
        self.io_nj = self.phases['io'].energy_nj
        self.total_nj = sum(r.energy_nj for r in self.phases.values())
        self.dynamic_nj = sum(r.dynamic_nj for r in self.phases.values())
        self.background_nj = sum(r.background_nj for r in self.phases.values())
        self.cycles = sum(r.cycles for r in self.phases.values())
        self.runtime_ns = sum(r.runtime_ns for r in self.phases.values())
        self.queries = per
        self.params_echo = asdict(params)

    def __str__(self):
        return f'Encoder: {self.encoder_nj:.2f} nJ\n' \
               f'Sim_Check: {self.simcheck_nj:.2f} nJ\n' \
               f'IO: {self.io_nj:.2f} nJ\n' \
               f'Total: {self.total_nj:.2f} nJ ' \
               f'({self.dynamic_nj:.2f} dynamic, {self.background_nj:.2f} background)\n' \
               f'Cycles: {self.cycles:.0f} ({self.runtime_ns:.0f} ns)'


def report(phases, params: EnergyParams, per: int = 1) -> Report:
    """Builds a report from per-phase ledgers

    :param phases: LedgerBook or mapping phase -> ledger
    :param params: energy parameters
    :param per: number of queries to average over
    :return: report
    """
    if isinstance(phases, LedgerBook):
        phases = phases.phases
    return Report(phases, params, per)
