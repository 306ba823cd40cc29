# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

import json
import os
import tempfile
import unittest

from ..config import RunConfig, load_config
from ..engine.layout import BundlingMode
from ..errors import ConfigError, InputError


class RunConfigTest(unittest.TestCase):
    def test_defaults(self):
        config = RunConfig.from_dict({})
        self.assertEqual(config, RunConfig())
        self.assertEqual((config.dim, config.ngram, config.seed, config.pgs), (8192, 4, 0, 1))
        self.assertIs(config.mode, BundlingMode.EXACT_SUM)
        self.assertEqual(config.geometry.subarrays, 2048)
        self.assertEqual(config.energy.background_mw, 212.0)

    def test_sections(self):
        config = RunConfig.from_dict({
            'geometry': {'banks': 2, 'subarrays_per_bank': 8},
            'energy': {'shift_pj_per_bit': 0.4},
            'hdc': {'dim': 1024, 'ngram': 3, 'seed': 9},
            'engine': {'pgs': 2, 'mode': 'majority'},
        })
        self.assertEqual(config.geometry.subarrays, 16)
        self.assertEqual(config.energy.shift_pj_per_bit, 0.4)
        self.assertEqual((config.dim, config.ngram, config.seed, config.pgs), (1024, 3, 9, 2))
        self.assertIs(config.mode, BundlingMode.MAJORITY)
        self.assertEqual(RunConfig.from_dict(config.to_dict()), config)

    def test_invalid(self):
        docs = [
            {'hdc': {'dim': 1000}},
            {'hdc': {'dim': 0}},
            {'hdc': {'ngram': 6}},
            {'hdc': {'seed': -1}},
            {'engine': {'pgs': 0}},
            {'engine': {'mode': 'median'}},
            {'geometry': {'tracks_per_dbc': 1000}},
            {'geometry': {'ap_low': 10}},
            {'energy': {'tr_pj_per_bit': -0.5}},
            {'hdc': {'dimension': 1024}},
            {'device': {}},
        ]
        for doc in docs:
            with self.subTest(doc=doc):
                with self.assertRaises(ConfigError):
                    RunConfig.from_dict(doc)

    def test_clock(self):
        config = RunConfig.from_dict({'geometry': {'clock_hz': 5e8}})
        self.assertEqual(config.energy.clock_hz, 5e8)
        with self.assertRaises(ConfigError):
            RunConfig.from_dict({'geometry': {'clock_hz': 5e8}, 'energy': {'clock_hz': 1e9}})

    def test_override(self):
        config = RunConfig().override(dim=512, seed=None, mode='preset')
        self.assertEqual((config.dim, config.seed, config.mode), (512, 0, BundlingMode.PRESET))
        with self.assertRaises(ConfigError):
            RunConfig().override(mode='median')
        with self.assertRaises(ConfigError):
            RunConfig().override(ngram=7)

    def test_hash(self):
        a = RunConfig(dim=1024)
        self.assertEqual(a.hash, RunConfig.from_dict({'hdc': {'dim': 1024}}).hash)
        self.assertNotEqual(a.hash, RunConfig(dim=1024, seed=1).hash)
        echo = a.echo()
        self.assertEqual(echo['hash'], a.hash)
        self.assertEqual(json.loads(a.canonical_json())['engine'], {'mode': 'exact-sum', 'pgs': 1})


class LoadConfigTest(unittest.TestCase):
    def test_files(self):
        with tempfile.TemporaryDirectory() as d:
            def write(name, text):
                path = os.path.join(d, name)
                with open(path, 'w') as f:
                    f.write(text)
                return path

            self.assertEqual(load_config(write('ok.json', '{"hdc": {"dim": 512}}')).dim, 512)
            with self.assertRaises(ConfigError):
                load_config(write('broken.json', '{"hdc": '))
            with self.assertRaises(ConfigError):
                load_config(write('list.json', '[1, 2]'))
            with self.assertRaises(InputError):
                load_config(os.path.join(d, 'missing.json'))


if __name__ == '__main__':
    unittest.main()
