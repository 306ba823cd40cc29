# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Checks the encoder ledger after a run.

Every item-memory fetch needs at most one shift and every character costs
the same number of encoder schedule cycles.
"""

import logging

from racetrack_hdc import CommandRun
from racetrack_hdc.engine.encoder import EncoderStats
from racetrack_hdc.errors import InvariantError

logger = logging.getLogger(__name__)

MAX_FETCH_SHIFTS = 1


def run_before(state: CommandRun):
    return state


def run_after(state: CommandRun):
    if state.engine is not None:
        audit(state.engine.stats)
    return state


def audit(stats: EncoderStats):
    """Raises InvariantError when a fetch needed more shifts or the schedule cost varies"""
    if stats.max_fetch_shifts > MAX_FETCH_SHIFTS:
        raise InvariantError(f"item-memory fetch needed {stats.max_fetch_shifts} shifts: {dict(stats.fetch_shifts)}")
    if len(stats.schedule_cycles) > 1:
        raise InvariantError(f"encoder schedule cost varies per character: {dict(stats.schedule_cycles)}")
    logger.info(f"ledger audit: {stats.fetches} fetches, shifts {dict(stats.fetch_shifts)}, "
                f"schedule cycles {dict(stats.schedule_cycles)}")
