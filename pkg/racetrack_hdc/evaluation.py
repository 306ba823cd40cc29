# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

"""Accuracy and average energy per query over a test set.

Every sentence runs through the device and the reference pipeline; a
disagreement in the query vector, any distance or the label is fatal.
"""

import csv
import logging
from typing import Dict, List, Mapping, Optional

from .cost import EnergyParams, LedgerBook, Phase, Report, report
from .engine.pipeline import QueryResult, RacetrackEngine, check_query, phase_book
from .hdc import reference
from .hdc.reference import AssociativeMemory

logger = logging.getLogger(__name__)

# average energy per query and inference cycles of the evaluated system
TARGETS = {'encoder_nj': 41.4, 'simcheck_nj': 8.67, 'cycles': 16700.0}
TARGET_TOLERANCE = 2.0

CSV_FIELDS = ('label', 'sentence', 'symbols', 'device', 'reference', 'distance',
              'cycles', 'encoder_nj', 'simcheck_nj', 'total_nj')


class LanguageScore(object):
    label: str
    sentences: int
    device_correct: int
    reference_correct: int
    agreement: int

    def __init__(self, label: str):
        self.label = label
        self.sentences = 0
        self.device_correct = 0
        self.reference_correct = 0
        self.agreement = 0

    @property
    def device_accuracy(self) -> float:
        return self.device_correct / self.sentences if self.sentences else 0.0

    @property
    def reference_accuracy(self) -> float:
        return self.reference_correct / self.sentences if self.sentences else 0.0

    @property
    def agreement_rate(self) -> float:
        return self.agreement / self.sentences if self.sentences else 1.0


class Evaluation(object):
    """Per-language scores, averaged per-query report and target ratios"""
    languages: Dict[str, LanguageScore]
    average: Optional[Report]
    targets: Dict[str, float]

    def __init__(self):
        self.languages = {}
        self.average = None
        self.targets = {}
        self._rows: List[dict] = []
        self._book = LedgerBook()

    @property
    def queries(self) -> int:
        return sum(s.sentences for s in self.languages.values())

    @property
    def device_accuracy(self) -> float:
        return sum(s.device_correct for s in self.languages.values()) / self.queries if self.queries else 0.0

    @property
    def reference_accuracy(self) -> float:
        return sum(s.reference_correct for s in self.languages.values()) / self.queries if self.queries else 0.0

    @property
    def agreement_rate(self) -> float:
        return sum(s.agreement for s in self.languages.values()) / self.queries if self.queries else 1.0

    def add_query(self, label: str, index: int, sentence: str, result: QueryResult, expected: str,
                  params: EnergyParams):
        book = phase_book(result.book, Phase.ENCODE, Phase.BUNDLE, Phase.SEARCH)
        self._book = self._book.merge(book)
        single = report(book, params)
        self._rows.append({'label': label, 'sentence': index, 'symbols': len(sentence), 'device': result.label,
                           'reference': expected, 'distance': result.distances[0][1],
                           'cycles': single.cycles, 'encoder_nj': single.encoder_nj,
                           'simcheck_nj': single.simcheck_nj, 'total_nj': single.total_nj})

    def finish(self, params: EnergyParams):
        if self.queries:
            self.average = report(self._book, params, per=self.queries)
            self.targets = target_ratios(self.average)

    def as_dict(self) -> dict:
        scores = {s.label: {'sentences': s.sentences, 'device_accuracy': s.device_accuracy,
                            'reference_accuracy': s.reference_accuracy, 'agreement': s.agreement_rate}
                  for s in self.languages.values()}
        return {
            'languages': scores,
            'overall': {'sentences': self.queries, 'device_accuracy': self.device_accuracy,
                        'reference_accuracy': self.reference_accuracy, 'agreement': self.agreement_rate},
            'average_query': self.average,
            'target_ratios': self.targets,
        }

    def write_csv(self, path: str):
        with open(path, 'w', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
            writer.writeheader()
            writer.writerows(self._rows)

    def __str__(self):
        lines = [f'{"language":<12}{"sentences":>10}{"device":>9}{"reference":>11}{"agree":>8}']
        for s in self.languages.values():
            lines.append(f'{s.label:<12}{s.sentences:>10}{s.device_accuracy:>9.2%}'
                         f'{s.reference_accuracy:>11.2%}{s.agreement_rate:>8.0%}')
        lines.append(f'{"overall":<12}{self.queries:>10}{self.device_accuracy:>9.2%}'
                     f'{self.reference_accuracy:>11.2%}{self.agreement_rate:>8.0%}')
        if self.average is not None:
            lines.append('')
            lines.append('Average per query')
            lines.append(str(self.average))
        return '\n'.join(lines)


def target_ratios(average: Report) -> Dict[str, float]:
    """Modelled figure over the published one, warns outside the tolerance"""
    ratios = {}
    for name, target in TARGETS.items():
        ratio = getattr(average, name) / target
        ratios[name] = ratio
        if not 1 / TARGET_TOLERANCE <= ratio <= TARGET_TOLERANCE:
            logger.warning(f"{name} {getattr(average, name):.2f} is {ratio:.2f}x the published {target}")
    return ratios


def evaluate(engine: RacetrackEngine, am: AssociativeMemory, test: Mapping[str, List[str]],
             limit: Optional[int] = None) -> Evaluation:
    """Classifies every test sentence on the device and with the reference

    :param engine: engine with the classes of ``am`` loaded
    :param am: associative memory of the trained model
    :param test: sentences per label
    :param limit: maximum sentences per label, None for all
    :return: evaluation
    """
    res = Evaluation()
    params = engine.config.energy
    for label, sentences in test.items():
        score = res.languages[label] = LanguageScore(label)
        for i, sentence in enumerate(sentences[:limit]):
            result = engine.classify(sentence)
            query = reference.encode(sentence, engine.im, engine.config.ngram)
            check_query(result, query, am)
            expected = reference.classify(query, am)
            score.sentences += 1
            score.device_correct += result.label == label
            score.reference_correct += expected == label
            score.agreement += result.label == expected
            res.add_query(label, i, sentence, result, expected, params)
        logger.info(f"'{label}': {score.device_correct}/{score.sentences} correct")
    res.finish(params)
    return res
