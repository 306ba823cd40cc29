# This file is part of the racetrack-hdc simulator.
#
# Copyright (c) 2021, the racetrack-hdc authors
#
# This software may be modified and distributed under the terms of
# the 3-Clause BSD License.  See the LICENSE file in the package base
# directory for details.

import unittest

import numpy as np

from ..cost import Phase
from ..device.counter import (CounterBank, RtmCounter, decode_counts, decode_digit, decode_window, digits_required,
                              johnson_window, pack_counter_readout, unpack_counter_readout)
from ..device.geometry import DeviceGeometry
from ..device.rtm import Device
from ..errors import AlignmentError, ContractError, CounterOverflowError, CounterStateError

GEOMETRY = DeviceGeometry(banks=1, subarrays_per_bank=1, tiles_per_subarray=1, dbcs_per_tile=4, tracks_per_dbc=24)


def device_counter(digits, saturating=False):
    subarray = Device(GEOMETRY).subarray(0, 0)
    dbc = subarray.dbc(0, 3)
    dbc.set_independent(True)
    return subarray, RtmCounter([dbc.nanowire(t) for t in range(digits)], saturating)


class DigitTest(unittest.TestCase):
    def test_johnson_windows(self):
        self.assertEqual(johnson_window(0), [0, 0, 0, 0, 0])
        self.assertEqual(johnson_window(3), [1, 1, 1, 0, 0])
        self.assertEqual(johnson_window(5), [1, 1, 1, 1, 1])
        self.assertEqual(johnson_window(7), [0, 0, 1, 1, 1])
        self.assertEqual(johnson_window(9), [0, 0, 0, 0, 1])
        with self.assertRaises(ContractError):
            johnson_window(10)

    def test_decode_all_digits(self):
        for value in range(10):
            with self.subTest(value=value):
                window = johnson_window(value)
                self.assertEqual(decode_digit(sum(window), bool(window[-1])), value)
                self.assertEqual(decode_window(window), value)

    def test_invalid_states(self):
        with self.assertRaises(CounterStateError):
            decode_digit(0, True)
        with self.assertRaises(CounterStateError):
            decode_digit(6, False)
        with self.assertRaises(CounterStateError):
            decode_window([1, 0, 1, 0, 0])

    def test_digits_required(self):
        for capacity, digits in [(1, 1), (9, 1), (10, 2), (999, 3), (1000, 4), (8192, 4)]:
            with self.subTest(capacity=capacity):
                self.assertEqual(digits_required(capacity), digits)
        with self.assertRaises(ContractError):
            digits_required(0)


class RtmCounterTest(unittest.TestCase):
    def test_unit_increments_to_capacity(self):
        counter = RtmCounter.allocate(999)
        self.assertEqual((counter.digits, counter.capacity), (3, 999))
        for k in range(1000):
            self.assertEqual(counter.decode(), k)
            if k % 97 == 0:
                self.assertEqual(counter.readout(), k)
            if k < 999:
                counter.increment()

    def test_bulk_increment(self):
        counter = RtmCounter.allocate(999)
        counter.increment(123)
        counter.increment(0)
        counter.increment(456)
        self.assertEqual(counter.decode(), 579)
        with self.assertRaises(ContractError):
            counter.increment(-1)

    def test_threshold_detection(self):
        counter = RtmCounter.allocate(99, saturating=True)
        for t in range(1, 100):
            counter.preset(99 - t)
            for count in range(100):
                with self.subTest(threshold=t, count=count):
                    self.assertEqual(counter.threshold_hit(), count >= t)
                counter.increment()

    def test_overflow(self):
        counter = RtmCounter.allocate(9)
        counter.preset(9)
        with self.assertRaises(CounterOverflowError):
            counter.increment()
        saturating = RtmCounter.allocate(9, saturating=True)
        saturating.preset(8)
        saturating.increment(5)
        self.assertEqual(saturating.decode(), 9)

    def test_preset_bounds(self):
        counter = RtmCounter.allocate(99)
        for value in (-1, 100):
            with self.subTest(value=value):
                with self.assertRaises(ContractError):
                    counter.preset(value)

    def test_msd_p_bit(self):
        counter = RtmCounter.allocate(99)
        counter.preset(49)
        self.assertFalse(counter.msd_p_bit())
        counter.increment()
        self.assertTrue(counter.msd_p_bit())

    def test_events(self):
        subarray, counter = device_counter(3)
        counter.increment(9)
        ledger = subarray.ledger[Phase.IO]
        self.assertEqual((ledger.tw_bits, ledger.cycles), (9, 9))
        # 9 -> 10 writes the low and the tens digit
        counter.increment()
        self.assertEqual(ledger.tw_bits, 11)
        counter.preset(0)
        self.assertEqual(ledger.write_bits, 3 * 5)
        before = ledger.read_bits
        self.assertEqual(counter.readout(), 0)
        self.assertEqual(ledger.read_bits - before, GEOMETRY.tracks_per_dbc)
        self.assertEqual(ledger.tr_bits, GEOMETRY.tracks_per_dbc)

    def test_needs_independent_dbc(self):
        dbc = Device(GEOMETRY).subarray(0, 0).dbc(0, 0)
        with self.assertRaises(ContractError):
            RtmCounter([dbc.nanowire(0)])

    def test_digit_moves_with_its_nanowire(self):
        _, counter = device_counter(2)
        counter.preset(3)
        dbc = counter.wires[0].dbc
        dbc.shift_nanowire(1, 1)
        self.assertEqual(counter.window(0), [1, 1, 1, 0, 0])
        self.assertEqual(counter.window(1), [0, 0, 0, 0, 0])
        dbc.shift_nanowire(0, 1)
        with self.assertRaises(CounterStateError):
            counter.decode()
        dbc.shift_nanowire(0, 17)
        with self.assertRaises(AlignmentError):
            counter.window(0)


class CounterBankTest(unittest.TestCase):
    def bank(self, saturating=False):
        subarray = Device(GEOMETRY).subarray(0, 0)
        return subarray, CounterBank([subarray.dbc(0, d) for d in range(3)], saturating)

    def test_masked_increments(self):
        _, bank = self.bank()
        rng = np.random.default_rng(3)
        expected = np.zeros(bank.tracks, dtype=np.int64)
        for _ in range(250):
            mask = rng.random(bank.tracks) < 0.6
            bank.increment_masked(mask)
            expected += mask
        np.testing.assert_array_equal(bank.decode(), expected)
        np.testing.assert_array_equal(bank.readout(), expected)

    def test_preset_per_track(self):
        _, bank = self.bank()
        values = np.array([0, 1, 9, 10, 99, 100, 555, 909, 990, 998, 999, 42] * 2)
        bank.preset(values)
        np.testing.assert_array_equal(bank.decode(), values)
        np.testing.assert_array_equal(bank.msd_p_bits(), values // 100 >= 5)
        with self.assertRaises(ContractError):
            bank.preset(1000)

    def test_overflow(self):
        _, bank = self.bank()
        bank.preset(999)
        with self.assertRaises(CounterOverflowError):
            bank.increment_masked(np.ones(bank.tracks, dtype=bool))
        bank.increment_masked(np.zeros(bank.tracks, dtype=bool))

        _, saturating = self.bank(saturating=True)
        saturating.preset(np.arange(980, 1004).clip(max=999))
        for _ in range(5):
            saturating.increment_masked(np.ones(saturating.tracks, dtype=bool))
        np.testing.assert_array_equal(saturating.decode(), np.arange(985, 1009).clip(max=999))

    def test_event_cost(self):
        subarray, bank = self.bank()
        mask = np.zeros(bank.tracks, dtype=bool)
        mask[:4] = True
        bank.increment_masked(mask)
        ledger = subarray.ledger[Phase.IO]
        self.assertEqual((ledger.tw_bits, ledger.cycles), (4, 1))


class ReadoutPackingTest(unittest.TestCase):
    def test_pack_layout(self):
        counts = np.array([[3, 1]])
        p = np.array([[0, 1]])
        row = pack_counter_readout(counts, p, 16)[0]
        self.assertEqual(row.tolist(), [1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0])
        self.assertEqual(decode_counts(counts, p).tolist(), [93])

    def test_rows_needed(self):
        rng = np.random.default_rng(0)
        counts = rng.integers(1, 6, size=(100, 4))
        p = rng.integers(0, 2, size=(100, 4))
        rows = pack_counter_readout(counts, p, 512)
        self.assertEqual(rows.shape, (5, 512))
        unpacked, unpacked_p = unpack_counter_readout(rows, 100, 4)
        np.testing.assert_array_equal(unpacked, counts)
        np.testing.assert_array_equal(unpacked_p, p)

    def test_corrupt_flags(self):
        rows = np.zeros((1, 12), dtype=np.uint8)
        rows[0, 1] = 1
        with self.assertRaises(CounterStateError):
            unpack_counter_readout(rows, 1, 2)
        with self.assertRaises(ContractError):
            pack_counter_readout(np.zeros((1, 3)), np.zeros((1, 3)), 12)


if __name__ == '__main__':
    unittest.main()
