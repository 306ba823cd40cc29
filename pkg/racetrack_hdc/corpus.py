# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .errors import InputError, PreconditionError
from .hdc.reference import ALPHABET

logger = logging.getLogger(__name__)

SPACE = ' '
_ASCII_LETTERS = frozenset('abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ')


def normalize(raw) -> str:
    """Maps text onto the 27-symbol alphabet

    ASCII letters are lowercased, every other character becomes a space.
    Runs of spaces are kept.
    """
    if isinstance(raw, bytes):
        raw = raw.decode('utf-8', errors='replace')
    return ''.join(c.lower() if c in _ASCII_LETTERS else SPACE for c in raw)


@dataclass
class Dataset:
    """Training text and test sentences per label, labels sorted"""
    train: Dict[str, str]
    test: Dict[str, List[str]] = field(default_factory=dict)
    unusable: Dict[str, int] = field(default_factory=dict)

    @property
    def labels(self) -> List[str]:
        return list(self.train)


def __read_text(path: str) -> str:
    try:
        with open(path, encoding='utf-8') as f:
            return f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise InputError(f"cannot read {path}: {e}") from None


def __list_labels(directory: str) -> List[str]:
    if not os.path.isdir(directory):
        raise InputError(f"dataset directory {directory} does not exist")
    return sorted(f[:-len('.txt')] for f in os.listdir(directory) if f.endswith('.txt'))


def load_dataset(train_dir: str, test_dir: Optional[str] = None, ngram: int = 4) -> Dataset:
    """Loads ``<label>.txt`` files, test files hold one sentence per line

    :param train_dir: directory of training texts
    :param test_dir: directory of test sentences, None for training only
    :param ngram: n-gram length, shorter sentences are dropped as unusable
    :return: normalized dataset
    """
    labels = __list_labels(train_dir)
    if not labels:
        raise InputError(f"no <label>.txt files in {train_dir}")
    train = {}
    for label in labels:
        raw = __read_text(os.path.join(train_dir, f'{label}.txt')).rstrip('\n')
        train[label] = normalize(raw.replace('\n', SPACE))
        if len(train[label]) < ngram:
            raise PreconditionError(f"training text of '{label}' is shorter than {ngram} symbols")
    dataset = Dataset(train)
    if test_dir is None:
        return dataset

    test_labels = __list_labels(test_dir)
    orphans = sorted(set(test_labels) - set(labels))
    if orphans:
        raise InputError(f"test labels without training text: {', '.join(orphans)}")
    for label in labels:
        if label not in test_labels:
            logger.warning(f"training label '{label}' has no test sentences")
            continue
        lines = __read_text(os.path.join(test_dir, f'{label}.txt')).splitlines()
        sentences = [normalize(line) for line in lines if line.strip()]
        usable = [s for s in sentences if len(s) >= ngram]
        if len(usable) < len(sentences):
            dataset.unusable[label] = len(sentences) - len(usable)
            logger.warning(f"'{label}': {len(sentences) - len(usable)} sentences shorter than {ngram} symbols skipped")
        dataset.test[label] = usable
    return dataset


def synth_corpus(seed: int, languages: int, train_len: int, sentences: int, sentence_len: int,
                 disjoint: bool = False, ngram: int = 4) -> Dataset:
    """Synthetic dataset, every language draws symbols from its own categorical distribution

    :param seed: generator seed
    :param languages: number of languages
    :param train_len: training text length per language
    :param sentences: test sentences per language
    :param sentence_len: symbols per test sentence
    :param disjoint: give every language its own share of the alphabet
    :param ngram: n-gram length, shorter sentences are marked unusable
    :return: dataset with labels ``lang00``, ``lang01``, ...
    """
    if min(languages, train_len, sentences, sentence_len) < 1:
        raise PreconditionError("synthetic corpus sizes must be positive")
    if disjoint and languages > len(ALPHABET):
        raise PreconditionError(f"at most {len(ALPHABET)} languages have disjoint symbol sets")
    rng = np.random.default_rng(seed)
    symbols = np.array(list(ALPHABET))
    dataset = Dataset({})
    for i in range(languages):
        label = f'lang{i:02d}'
        if disjoint:
            weights = np.zeros(len(ALPHABET))
            weights[i::languages] = rng.dirichlet(np.ones(len(weights[i::languages])))
        else:
            weights = rng.dirichlet(np.full(len(ALPHABET), 0.5))
        dataset.train[label] = ''.join(rng.choice(symbols, size=train_len, p=weights))
        drawn = [''.join(rng.choice(symbols, size=sentence_len, p=weights)) for _ in range(sentences)]
        if sentence_len < ngram:
            dataset.unusable[label] = len(drawn)
            drawn = []
        dataset.test[label] = drawn
    return dataset


def write_dataset(dataset: Dataset, out_dir: str):
    """Writes a dataset in the layout read by :func:`load_dataset`"""
    for split in ('train', 'test'):
        os.makedirs(os.path.join(out_dir, split), exist_ok=True)
    for label, text in dataset.train.items():
        with open(os.path.join(out_dir, 'train', f'{label}.txt'), 'w', encoding='utf-8') as f:
            f.write(text + '\n')
    for label, lines in dataset.test.items():
        with open(os.path.join(out_dir, 'test', f'{label}.txt'), 'w', encoding='utf-8') as f:
            f.writelines(line + '\n' for line in lines)
