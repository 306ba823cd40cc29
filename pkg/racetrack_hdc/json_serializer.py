# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

from enum import Enum
from json import JSONEncoder

import numpy as np

from .cost import CostLedger, LedgerBook, PhaseReport, Report


def filter_members(d: dict) -> dict:
    """Removes private and protected members (which starts with '_')

    :param d: member dictionary
    :return: member dictionary
    """
    return {k: v for k, v in d.items() if not k.startswith('_')}


class ReportSerializer(JSONEncoder):
    """Json Encoder for reports, ledgers and numpy values
    """

    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, Enum):
            return o.value
        if isinstance(o, CostLedger):
            return o.as_dict()
        if isinstance(o, LedgerBook):
            return {p.value: ledger for p, ledger in o.phases.items()}
        if isinstance(o, (Report, PhaseReport)):
            return filter_members(o.__dict__)

        try:
            iterable = iter(o)
        except TypeError:
            pass
        else:
            return list(iterable)

        # Let the base class default method raise the TypeError
        return JSONEncoder.default(self, o)
