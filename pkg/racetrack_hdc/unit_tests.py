# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

import json
import os
import unittest
from pathlib import Path

from . import evaluate_model, train
from .config import RunConfig
from .corpus import load_dataset
from .hdc import reference
from .model import Model


class PipelineEndToEndTest(unittest.TestCase):
    def test_pipeline_end_to_end(self):
        path = Path(__file__).parent.parent / 'test'
        for file in [f.name for f in os.scandir(path) if f.name.endswith('.json')]:
            with self.subTest(file=file):
                with open(os.path.join(path, file)) as f:
                    case = json.load(f)
                config = RunConfig.from_dict(case['config'])
                data = os.path.join(path, file[:-5])
                dataset = load_dataset(os.path.join(data, 'train'), os.path.join(data, 'test'), config.ngram)

                state = train(config, dataset.train)
                self.assertEqual(state.training.am, reference.train(dataset.train, config.encode_params))

                model = Model(state.training.am, config.seed, state.engine.placement, {'ngram': config.ngram})
                evaluation = evaluate_model(config, model, dataset.test).evaluation
                actual = subset(evaluation.as_dict(), case['expected'])
                self.assertEqual(ordered(actual), ordered(case['expected']))


def subset(actual, expected):
    """Members of ``actual`` named in ``expected``, recursively"""
    if isinstance(expected, dict):
        return {k: subset(actual[k], v) for k, v in expected.items()}
    return actual


def ordered(obj):
    if isinstance(obj, dict):
        return sorted((k, ordered(v)) for k, v in obj.items())
    if isinstance(obj, list):
        return sorted(ordered(x) for x in obj)
    else:
        return obj


if __name__ == '__main__':
    unittest.main()
