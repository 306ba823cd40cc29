# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Exception hierarchy shared by all components.

The command line exits with ``exit_code`` of the raised class.
"""


class RacetrackError(Exception):
    """Base class of all simulator errors"""
    exit_code = 1


class ConfigError(RacetrackError):
    exit_code = 2


class InputError(RacetrackError):
    """Missing or malformed input files"""
    exit_code = 2


class PreconditionError(RacetrackError):
    """Caller data violates an operation precondition"""
    exit_code = 3


class AlignmentError(PreconditionError):
    pass


class ModeError(PreconditionError):
    pass


class ContractError(PreconditionError):
    pass


class CounterStateError(PreconditionError):
    pass


class CounterOverflowError(PreconditionError):
    pass


class CapacityError(PreconditionError):
    pass


class InvariantError(RacetrackError):
    """Internal invariant failure, e.g. device and reference disagree"""
    exit_code = 4


