# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Bar chart of training cycles and energy per language."""

import logging
from typing import Dict

import matplotlib  # type:ignore

matplotlib.use('Agg')
import matplotlib.pyplot as plt  # type:ignore  # noqa: E402

from racetrack_hdc import CommandRun  # noqa: E402
from racetrack_hdc.cost import EnergyParams, LedgerBook, report  # noqa: E402

logger = logging.getLogger(__name__)


def run_before(state: CommandRun):
    return state


def run_after(state: CommandRun):
    if state.training is None:
        return state
    path = f'{state.out}.runtime.png' if state.out else 'runtime.png'
    plot_runtime(state.training.books, state.config.energy, path)
    logger.info(f"runtime plot written to {path}")
    return state


def plot_runtime(books: Dict[str, LedgerBook], params: EnergyParams, path: str):
    """Writes cycles (left axis) and energy (right axis) per language to ``path``"""
    labels = list(books)
    reports = [report(books[label], params) for label in labels]
    positions = range(len(labels))

    fig, ax = plt.subplots(figsize=(max(6, len(labels) * 0.6), 4))
    ax.bar([p - 0.2 for p in positions], [r.cycles for r in reports], width=0.4, color='tab:blue')
    ax.set_ylabel('cycles', color='tab:blue')
    ax.set_xticks(list(positions))
    ax.set_xticklabels(labels, rotation=45, ha='right')

    energy_ax = ax.twinx()
    energy_ax.bar([p + 0.2 for p in positions], [r.total_nj / 1000 for r in reports], width=0.4,
                  color='tab:orange')
    energy_ax.set_ylabel('energy [uJ]', color='tab:orange')

    ax.set_title('Training runtime per language')
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
