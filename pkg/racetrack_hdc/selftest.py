# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Embedded oracle suites run by ``racetrack_hdc selftest``.

Every suite compares the simulated device against a brute-force oracle and
raises :class:`InvariantError` on the first mismatch.
"""

import logging
import time
from itertools import product
from typing import Callable, List, NamedTuple

import numpy as np

from .config import RunConfig
from .corpus import synth_corpus
from .device.counter import RtmCounter
from .device.geometry import Address, DeviceGeometry
from .device.periphery import CimOpKind, CimRequest, cim_logic, cimop, flags_from_count
from .device.rtm import Device
from .engine.layout import BundlingMode
from .engine.pipeline import RacetrackEngine, check_agreement, check_query
from .errors import InvariantError
from .hdc import reference

logger = logging.getLogger(__name__)


class SuiteResult(NamedTuple):
    name: str
    cases: int
    seconds: float


def check_counter_sequence(quick: bool) -> int:
    """Unit increments on a three-digit counter decode to their count"""
    counter = RtmCounter.allocate(999)
    last = 199 if quick else counter.capacity
    for k in range(last + 1):
        if counter.decode() != k:
            raise InvariantError(f"counter decodes {counter.decode()} after {k} increments")
        if k % 10 == 9 and counter.readout() != k:
            raise InvariantError(f"counter reads out {counter.readout()} after {k} increments")
        if k < last:
            counter.increment()
    return last + 1


def check_counter_threshold(quick: bool) -> int:
    """A saturating counter preset to M-T reaches M exactly after T increments"""
    counter = RtmCounter.allocate(99, saturating=True)
    capacity = counter.capacity
    thresholds = (1, 2, 9, 10, 11, 50, 98, 99) if quick else range(1, capacity + 1)
    cases = 0
    for t in thresholds:
        counter.preset(capacity - t)
        for count in range(capacity + 1):
            if counter.threshold_hit() != (count >= t):
                raise InvariantError(f"threshold {t}: hit={counter.threshold_hit()} after {count} increments")
            counter.increment()
            cases += 1
    return cases


def check_logic_gates(quick: bool) -> int:
    """Gate-level logic block against the operand column, all columns and sizes"""
    cases = 0
    for size in range(1, 6):
        for column in product((0, 1), repeat=size):
            logic = cim_logic(flags_from_count(sum(column)), size)
            expected = (all(column), any(column), sum(column) % 2 == 1)
            if tuple(logic) != expected:
                raise InvariantError(f"logic block {logic} for column {column}, expected {expected}")
            cases += 1
    return cases


def check_cimop_rows(quick: bool) -> int:
    """Row-wide cimop AND/OR/XOR on a device holding all 32 five-bit columns"""
    geometry = DeviceGeometry(banks=1, subarrays_per_bank=1, tiles_per_subarray=1, dbcs_per_tile=1,
                              tracks_per_dbc=32, domains_per_track=32)
    columns = np.arange(32)
    cases = 0
    for size in range(1, geometry.trd + 1):
        device = Device(geometry)
        dbc = device.dbc(Address(0, 0, 0, 0, geometry.ap_low))
        operands = ((columns[np.newaxis, :] >> np.arange(geometry.trd)[:, np.newaxis]) & 1).astype(np.uint8)
        operands[size:] = 0
        for i, row in enumerate(operands):
            dbc.write_row(dbc.align(geometry.ap_low + i), row)
        ones = operands.sum(axis=0)
        expected = {CimOpKind.AND: ones == size, CimOpKind.OR: ones >= 1, CimOpKind.XOR: ones % 2 == 1}
        for op, oracle in expected.items():
            row = cimop(device, CimRequest(Address(0, 0, 0, 0, geometry.ap_low), size, op))
            if not np.array_equal(row, oracle.astype(np.uint8)):
                raise InvariantError(f"cimop {op.name} size {size} differs from the brute-force row")
            cases += 1
    return cases


def check_pipeline(quick: bool) -> int:
    """Device training and classification agree bit for bit with the reference"""
    corpus = synth_corpus(seed=11, languages=3, train_len=120 if quick else 400,
                          sentences=1 if quick else 3, sentence_len=40)
    runs = [(1, BundlingMode.EXACT_SUM)]
    if not quick:
        runs += [(2, BundlingMode.EXACT_SUM), (1, BundlingMode.PRESET)]
    cases = 0
    for pgs, mode in runs:
        config = RunConfig(dim=512 if quick else 1024, pgs=pgs, mode=mode)
        engine = RacetrackEngine.for_corpus(config, corpus.train)
        trained = engine.train(corpus.train)
        expected = reference.train(corpus.train, config.encode_params, engine.im)
        for label in expected.labels:
            check_agreement(label, trained.am[label], expected[label])
            cases += 1
        engine.load_classes(trained.am)
        for sentences in corpus.test.values():
            for sentence in sentences:
                result = engine.classify(sentence)
                check_query(result, reference.encode(sentence, engine.im, config.ngram), expected)
                cases += 1
    return cases


def check_orthogonality(quick: bool) -> int:
    """Random hypervectors sit close to half the dimension apart"""
    dim = 8192
    pairs = 50 if quick else 500
    im = reference.gen_item_memory(0, dim)
    rng = np.random.default_rng(0)
    distances = []
    for _ in range(pairs):
        a, b = rng.integers(0, 2, size=(2, dim), dtype=np.uint8)
        distances.append(reference.hamming(a, b) / dim)
    distances.extend(reference.hamming(im[x], im[y]) / dim
                     for x, y in zip(reference.ALPHABET, reference.ALPHABET[1:]))
    distances = np.array(distances)
    if abs(distances.mean() - 0.5) > 0.005 or np.abs(distances - 0.5).max() >= 0.035:
        raise InvariantError(f"normalized distances mean {distances.mean():.4f}, "
                             f"max deviation {np.abs(distances - 0.5).max():.4f}")
    return len(distances)


SUITES: List[Callable[[bool], int]] = [
    check_logic_gates,
    check_cimop_rows,
    check_counter_sequence,
    check_counter_threshold,
    check_orthogonality,
    check_pipeline,
]


def run_selftest(quick: bool = False) -> List[SuiteResult]:
    """Runs every suite, reduced sizes with ``quick``

    :return: cases and run time per suite
    """
    results = []
    for suite in SUITES:
        start = time.time()
        cases = suite(quick)
        results.append(SuiteResult(suite.__name__[len('check_'):], cases, time.time() - start))
        logger.info(f"{results[-1].name}: {cases} cases passed")
    return results
