# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

import os
import tempfile
import unittest

import numpy as np

from ..errors import ConfigError, InputError, PreconditionError
from ..hdc import container
from ..hdc.reference import (ALPHABET, AssociativeMemory, EncodeParams, bind_ngram, classify, encode,
                             gen_item_memory, hamming, ngram_counts, permute, rank, symbol_frequencies,
                             symbol_ids, threshold, train)


def brute_force_encode(text, im, ngram):
    grams = [bind_ngram(text[i:i + ngram], im) for i in range(len(text) - ngram + 1)]
    return threshold(np.sum(grams, axis=0), len(grams))


class ItemMemoryTest(unittest.TestCase):
    def test_deterministic(self):
        a = gen_item_memory(7, 1024)
        self.assertEqual(a.vectors.shape, (27, 1024))
        self.assertEqual(a, gen_item_memory(7, 1024))
        self.assertNotEqual(a, gen_item_memory(8, 1024))
        self.assertTrue(set(np.unique(a.vectors)) <= {0, 1})

    def test_dimension(self):
        for dim in (0, 1000, 8191):
            with self.subTest(dim=dim):
                with self.assertRaises(ConfigError):
                    gen_item_memory(0, dim)

    def test_orthogonality(self):
        dim = 8192
        rng = np.random.default_rng(1)
        distances = np.array([hamming(*rng.integers(0, 2, size=(2, dim), dtype=np.uint8)) / dim
                              for _ in range(500)])
        self.assertAlmostEqual(distances.mean(), 0.5, delta=0.005)
        self.assertLess(np.abs(distances - 0.5).max(), 0.035)

        im = gen_item_memory(0, dim)
        symbols = [hamming(im[x], im[y]) / dim for i, x in enumerate(ALPHABET) for y in ALPHABET[i + 1:]]
        self.assertLess(np.abs(np.array(symbols) - 0.5).max(), 0.035)

    def test_unknown_symbol(self):
        with self.assertRaises(PreconditionError):
            gen_item_memory(0, 512)['A']


class PermuteTest(unittest.TestCase):
    def test_rotate_left_per_chunk(self):
        hv = np.zeros(1024, dtype=np.uint8)
        hv[0] = 1
        hv[512] = 1
        hv[700] = 1
        rotated = permute(hv, 1)
        self.assertEqual(np.flatnonzero(rotated).tolist(), [1, 513, 701])
        hv[:] = 0
        hv[511] = 1
        self.assertEqual(np.flatnonzero(permute(hv, 1)).tolist(), [0])

    def test_composition(self):
        hv = gen_item_memory(3, 1024)['q']
        np.testing.assert_array_equal(permute(permute(hv, 1), 2), permute(hv, 3))
        np.testing.assert_array_equal(permute(hv, 512), hv)
        with self.assertRaises(PreconditionError):
            permute(hv, -1)


class EncodeTest(unittest.TestCase):
    im = gen_item_memory(5, 512)

    def test_bind_ngram(self):
        expected = permute(self.im['a'], 2) ^ permute(self.im['b'], 1) ^ self.im['c']
        np.testing.assert_array_equal(bind_ngram('abc', self.im), expected)

    def test_against_brute_force(self):
        rng = np.random.default_rng(2)
        for ngram, length in [(1, 40), (3, 57), (4, 120), (5, 2060)]:
            with self.subTest(ngram=ngram, length=length):
                text = ''.join(rng.choice(list(ALPHABET), size=length))
                np.testing.assert_array_equal(encode(text, self.im, ngram), brute_force_encode(text, self.im, ngram))

    def test_counts(self):
        counts, total = ngram_counts('abcab', self.im, 4)
        self.assertEqual(total, 2)
        np.testing.assert_array_equal(counts, bind_ngram('abca', self.im).astype(int) + bind_ngram('bcab', self.im))

    def test_threshold_ties(self):
        self.assertEqual(threshold([2, 3, 1], 4).tolist(), [0, 1, 0])
        self.assertEqual(threshold([2, 3, 1], 5).tolist(), [0, 1, 0])
        self.assertEqual(threshold([1, 0], 1).tolist(), [1, 0])

    def test_short_text(self):
        for text in ('', 'abc'):
            with self.subTest(text=text):
                with self.assertRaises(PreconditionError):
                    encode(text, self.im, 4)

    def test_symbols(self):
        self.assertEqual(symbol_ids('az ').tolist(), [0, 25, 26])
        with self.assertRaises(PreconditionError):
            symbol_ids('a!')
        freq = symbol_frequencies(['aab', 'b '])
        self.assertEqual((freq['a'], freq['b'], freq[' '], freq['z']), (2, 2, 1, 0))

    def test_params(self):
        with self.assertRaises(ConfigError):
            EncodeParams(dim=1000)
        with self.assertRaises(ConfigError):
            EncodeParams(ngram=0)


class AssociativeMemoryTest(unittest.TestCase):
    def test_classify_and_rank(self):
        am = AssociativeMemory([('x', np.array([1, 1, 0, 0])), ('y', np.array([1, 0, 0, 0])),
                                ('z', np.array([0, 1, 1, 1]))])
        query = np.array([1, 1, 1, 0])
        self.assertEqual(am.distances(query), [('x', 1), ('y', 2), ('z', 2)])
        self.assertEqual(classify(query, am), 'x')
        # equal distances keep insertion order
        self.assertEqual(rank([('b', 3), ('a', 1), ('c', 3)]), [('a', 1), ('b', 3), ('c', 3)])

    def test_errors(self):
        am = AssociativeMemory()
        with self.assertRaises(PreconditionError):
            classify(np.zeros(4, dtype=np.uint8), am)
        am.add('x', np.zeros(4, dtype=np.uint8))
        with self.assertRaises(PreconditionError):
            am.add('x', np.ones(4, dtype=np.uint8))
        with self.assertRaises(PreconditionError):
            hamming(np.zeros(4), np.zeros(5))

    def test_train(self):
        params = EncodeParams(dim=512, ngram=3, seed=4)
        corpus = {'first': 'the quick brown fox', 'second': 'jumps over the lazy dog'}
        am = train(corpus, params)
        self.assertEqual(am.labels, ['first', 'second'])
        np.testing.assert_array_equal(am['second'], encode(corpus['second'], gen_item_memory(4, 512), 3))


class ContainerTest(unittest.TestCase):
    def test_save_load(self):
        im = gen_item_memory(9, 512)
        am = AssociativeMemory([('en', im['e']), ('de', im['d'])])
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, 'model.rthd')
            container.save_memory(path, am, 9)
            with open(path, 'rb') as f:
                data = f.read()
            self.assertEqual(len(data), 22 + 2 * (2 + 2 + 64))
            self.assertEqual(container.load_memory(path), (am, 9))

            im_path = os.path.join(d, 'im.rthd')
            container.save_item_memory(im_path, im)
            self.assertEqual(container.load_item_memory(im_path), im)
            with self.assertRaises(InputError):
                container.load_item_memory(path)

    def test_malformed(self):
        data = container.dumps(512, 1, [('en', np.ones(512, dtype=np.uint8))])
        cases = {
            'truncated header': data[:10],
            'truncated entry': data[:-1],
            'trailing bytes': data + b'\0',
            'magic': b'XXXX' + data[4:],
            'version': data[:4] + b'\x02\x00' + data[6:],
        }
        for name, blob in cases.items():
            with self.subTest(case=name):
                with self.assertRaises(InputError):
                    container.loads(blob)

    def test_missing_file(self):
        with self.assertRaises(InputError):
            container.load_memory('/nonexistent/model.rthd')


if __name__ == '__main__':
    unittest.main()
