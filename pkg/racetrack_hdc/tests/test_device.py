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
from ..device.geometry import Address, DeviceGeometry, Port
from ..device.rtm import Device
from ..errors import AlignmentError, ConfigError, ContractError, InputError, ModeError

SMALL = dict(banks=1, subarrays_per_bank=2, tiles_per_subarray=1, dbcs_per_tile=2, tracks_per_dbc=8)


def small_dbc(**kwargs):
    device = Device(DeviceGeometry(**SMALL, **kwargs))
    subarray = device.subarray(0, 0)
    return device, subarray, subarray.dbc(0, 0)


class GeometryTest(unittest.TestCase):
    def test_defaults(self):
        g = DeviceGeometry()
        self.assertEqual(g.subarrays, 32 * 64)
        self.assertEqual((g.ap_low, g.ap_high, g.trd), (13, 17, 5))
        self.assertEqual(g.port_index(Port.UPPER), 17)

    def test_invalid(self):
        for kwargs in [dict(ap_low=12), dict(trd=4), dict(tracks_per_dbc=0), dict(ap_low=28, ap_high=32)]:
            with self.subTest(**kwargs):
                with self.assertRaises(ConfigError):
                    DeviceGeometry(**kwargs)

    def test_from_dict(self):
        g = DeviceGeometry.from_dict({'tracks_per_dbc': 64})
        self.assertEqual(g.tracks_per_dbc, 64)
        self.assertEqual(g.domains_per_track, 32)
        with self.assertRaises(ConfigError):
            DeviceGeometry.from_dict({'tracks': 64})

    def test_address(self):
        a = Address.parse('1.2.15.9', '13')
        self.assertEqual(a, Address(1, 2, 15, 9, 13))
        self.assertEqual(str(a), '1.2.15.9@13')
        for path, loc in [('1.2.15', '13'), ('1.x.15.9', '13'), ('1.2.15.9', 'low')]:
            with self.subTest(path=path, loc=loc):
                with self.assertRaises(InputError):
                    Address.parse(path, loc)
        with self.assertRaises(ContractError):
            Address(0, 0, 16, 0, 0).check(DeviceGeometry())


class DbcTest(unittest.TestCase):
    def test_nearest_port_alignment(self):
        _, subarray, dbc = small_dbc()
        self.assertEqual(dbc.align(13), Port.LOWER)
        self.assertTrue(subarray.ledger.total().is_empty())

        # 7 shifts to the lower port, 3 to the upper one
        self.assertEqual(dbc.align(20), Port.UPPER)
        self.assertEqual(dbc.shared_offset, -3)
        self.assertEqual(dbc.location_under(Port.LOWER), 16)
        ledger = subarray.ledger[Phase.IO]
        self.assertEqual(ledger.shift_bits, 3 * 8)
        self.assertEqual(ledger.cycles, 3)

    def test_tie_goes_to_lower_port(self):
        _, _, dbc = small_dbc()
        self.assertEqual(dbc.nearest_port(15), Port.LOWER)
        self.assertEqual(dbc.nearest_port(16), Port.UPPER)

    def test_data_stays_at_its_location(self):
        _, subarray, dbc = small_dbc()
        row = np.array([1, 0, 1, 1, 0, 0, 1, 0], dtype=np.uint8)
        dbc.write_row(dbc.align(5), row)
        dbc.write_row(dbc.align(25), 1 - row)
        np.testing.assert_array_equal(dbc.read_row(dbc.align(5)), row)
        np.testing.assert_array_equal(dbc.rows[25], 1 - row)
        ledger = subarray.ledger[Phase.IO]
        self.assertEqual(ledger.write_bits, 16)
        self.assertEqual(ledger.read_bits, 8)

    def test_shift_out_of_range(self):
        _, _, dbc = small_dbc()
        for location in (-1, 32):
            with self.subTest(location=location):
                with self.assertRaises(AlignmentError):
                    dbc.shift_to(location)

    def test_write_width(self):
        _, _, dbc = small_dbc()
        with self.assertRaises(ContractError):
            dbc.write_row(Port.LOWER, np.zeros(9, dtype=np.uint8))

    def test_window_and_transverse_read(self):
        _, subarray, dbc = small_dbc()
        rows = np.eye(5, 8, dtype=np.uint8)
        rows[4, :] = 1
        for i, row in enumerate(rows):
            dbc.write_row(dbc.align(13 + i), row)
        dbc.shift_to(13, Port.LOWER)
        np.testing.assert_array_equal(dbc.window(), rows)
        before = subarray.ledger[Phase.IO].tr_bits
        np.testing.assert_array_equal(dbc.tr_read(), rows.sum(axis=0))
        self.assertEqual(subarray.ledger[Phase.IO].tr_bits - before, 8)

    def test_window_leaving_the_track(self):
        _, _, dbc = small_dbc()
        dbc.shift_to(0, Port.UPPER)
        with self.assertRaises(AlignmentError):
            dbc.window()

    def test_independent_mode(self):
        _, subarray, dbc = small_dbc()
        dbc.set_independent(True)
        with self.assertRaises(ModeError):
            dbc.shift_to(13)
        with self.assertRaises(ModeError):
            _ = dbc.shared_offset
        dbc.shift_nanowire(3, 2)
        self.assertEqual(dbc.nanowire(3).offset, 2)
        self.assertEqual(dbc.nanowire(2).offset, 0)
        self.assertEqual(subarray.ledger[Phase.IO].shift_bits, 2)
        with self.assertRaises(ModeError):
            dbc.set_independent(False)
        dbc.shift_nanowire(3, -2)
        dbc.set_independent(False)
        self.assertEqual(dbc.shared_offset, 0)

    def test_shift_nanowire_needs_independent_mode(self):
        _, _, dbc = small_dbc()
        with self.assertRaises(ModeError):
            dbc.shift_nanowire(0, 1)

    def test_nanowire_bit_at(self):
        _, _, dbc = small_dbc()
        dbc.rows[13, 4] = 1
        wire = dbc.nanowire(4)
        self.assertEqual(wire.bit_at(13), 1)
        dbc.shift_to(12, Port.LOWER)
        self.assertEqual(wire.bit_at(14), 1)
        self.assertIsNone(wire.bit_at(0))


class DbcPropertyTest(unittest.TestCase):
    """Randomized checks of shifting, reading and the transverse read"""

    def setUp(self):
        self.rng = np.random.default_rng(17)
        _, self.subarray, self.dbc = small_dbc()
        self.dbc.rows[:] = self.rng.integers(0, 2, size=self.dbc.rows.shape)

    def random_alignment(self):
        location = int(self.rng.integers(0, 32))
        port = [Port.LOWER, Port.UPPER, None][int(self.rng.integers(0, 3))]
        try:
            self.dbc.shift_to(location, port)
        except AlignmentError:
            pass

    def test_transverse_read_counts_the_window(self):
        for _ in range(200):
            location = int(self.rng.integers(0, 32 - 5 + 1))
            self.dbc.shift_to(location, Port.LOWER)
            expected = [sum(int(self.dbc.rows[location + i, t]) for i in range(5)) for t in range(8)]
            with self.subTest(location=location):
                self.assertEqual(self.dbc.tr_read().tolist(), expected)

    def test_shifts_conserve_content(self):
        before = self.dbc.rows.copy()
        shifts = self.subarray.ledger[Phase.IO].shift_bits
        for _ in range(300):
            self.random_alignment()
            np.testing.assert_array_equal(self.dbc.rows, before)
            for port in (Port.LOWER, Port.UPPER):
                location = self.dbc.location_under(port)
                if 0 <= location < 32:
                    np.testing.assert_array_equal(self.dbc.peek(port), before[location])
        self.assertGreater(self.subarray.ledger[Phase.IO].shift_bits, shifts)

    def test_reads_are_pure(self):
        for _ in range(100):
            self.random_alignment()
            rows, offset = self.dbc.rows.copy(), self.dbc.shared_offset
            for port in (Port.LOWER, Port.UPPER):
                try:
                    self.dbc.read_row(port)
                except AlignmentError:
                    pass
            try:
                self.dbc.tr_read()
            except AlignmentError:
                pass
            np.testing.assert_array_equal(self.dbc.rows, rows)
            self.assertEqual(self.dbc.shared_offset, offset)


class DeviceTest(unittest.TestCase):
    def test_lazy_allocation_and_phases(self):
        device = Device(DeviceGeometry(**SMALL))
        with self.assertRaises(ContractError):
            device.subarray_at(2)
        a = device.subarray_at(0)
        b = device.subarray_at(1)
        self.assertIs(device.subarray(0, 1), b)
        device.set_phase(Phase.ENCODE)
        a.cim_dbc(1).align(20)
        b.cim_dbc(0).align(20)
        book = device.ledger()
        self.assertEqual(book[Phase.ENCODE].shift_bits, 2 * 3 * 8)
        self.assertTrue(book[Phase.IO].is_empty())

    def test_dbc_by_address(self):
        device = Device(DeviceGeometry(**SMALL))
        dbc = device.dbc(Address(0, 1, 0, 1, 13))
        self.assertIs(dbc, device.subarray(0, 1).dbc(0, 1))
        with self.assertRaises(ContractError):
            device.dbc(Address(0, 1, 0, 2, 13))


if __name__ == '__main__':
    unittest.main()
