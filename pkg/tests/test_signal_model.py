#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

import math

import numpy as np

from multiscan.signal_model import (
    STREAM_CALIBRATION,
    STREAM_VALIDATION,
    DataVector,
    DomainError,
    IntervalIndex,
    SeedRecord,
    alr_small_scale_norm,
    cumsum,
    make_signal,
    optimal_norm,
    sample,
    sample_batch,
    scan_norm,
)

from .multiscantest import MultiscanTestCase, main


class IntervalIndexTest(MultiscanTestCase):
    def test_length_and_scale(self):
        i = IntervalIndex(3, 8)
        self.assertEqual(i.length, 5)
        self.assertEqual(i.scale(10), 0.5)

    def test_check(self):
        self.assertEqual(IntervalIndex(0, 10).check(10), (0, 10))
        for bad in [(5, 5), (6, 5), (-1, 3), (0, 11)]:
            with self.assertRaises(DomainError):
                IntervalIndex(*bad).check(10)

    def test_reversed(self):
        self.assertEqual(IntervalIndex(2, 5).reversed(10), (5, 8))


class MakeSignalTest(MultiscanTestCase):
    def test_zero_norm(self):
        spec = make_signal(10, 0.0, (0, 5))
        self.assertEqual(spec.mu, 0.0)
        self.assertTrue(spec.is_null)
        self.assertEqual(list(spec.mean_vector()), [0.0] * 10)

    def test_half_support(self):
        spec = make_signal(10000, 0.04, (0, 5000))
        self.assertAlmostEqual(spec.mu, 0.0565685, places=6)
        self.assertAlmostEqual(spec.norm, 0.04)
        self.assertAlmostEqual(spec.expected_ystat, 4.0)

    def test_quarter_support(self):
        spec = make_signal(100, 0.3, (10, 35))
        self.assertAlmostEqual(spec.mu, 0.6)
        f = spec.mean_vector()
        self.assertEqual(f[9], 0)
        self.assertAlmostEqual(f[10], 0.6)
        self.assertAlmostEqual(f[34], 0.6)
        self.assertEqual(f[35], 0)

    def test_negative_sign(self):
        spec = make_signal(100, 0.3, (10, 35), sign=-1)
        self.assertAlmostEqual(spec.mu, -0.6)
        self.assertAlmostEqual(spec.norm, 0.3)

    def test_invalid(self):
        with self.assertRaises(DomainError):
            make_signal(10, 0.1, (5, 5))
        with self.assertRaises(DomainError):
            make_signal(100, 0.1, (0, 101))
        with self.assertRaises(DomainError):
            make_signal(100, -0.1, (0, 10))
        with self.assertRaises(DomainError):
            make_signal(100, 0.1, (0, 10), sign=2)


class SeedRecordTest(MultiscanTestCase):
    def test_fields(self):
        s = SeedRecord(7)
        self.assertEqual((s.seed, s.replicate, s.stream), (7, 0, 0))
        self.assertEqual(s.at(3).replicate, 3)
        self.assertEqual(s.at(3).with_stream(STREAM_CALIBRATION).stream, 1)

    def test_range(self):
        with self.assertRaises(DomainError):
            SeedRecord(-1)
        with self.assertRaises(DomainError):
            SeedRecord(2**64)
        SeedRecord(2**64 - 1)

    def test_json(self):
        s = SeedRecord(11, 4, STREAM_VALIDATION)
        self.assertEqual(SeedRecord.from_json(s.to_json()), s)


class SampleTest(MultiscanTestCase):
    def test_deterministic(self):
        spec = make_signal(200, 0.2, (50, 100))
        a = sample(spec, SeedRecord(42, 3))
        b = sample(spec, SeedRecord(42, 3))
        np.testing.assert_array_equal(a.values, b.values)
        self.assertEqual(a.seed, SeedRecord(42, 3))

    def test_keys_differ(self):
        spec = make_signal(200, 0.0, (0, 200))
        base = sample(spec, SeedRecord(42)).values
        for other in [SeedRecord(43), SeedRecord(42, 1), SeedRecord(42, 0, 1)]:
            self.assertFalse(np.array_equal(base, sample(spec, other).values))

    def test_read_only(self):
        y = sample(make_signal(10, 0.0, (0, 10)), SeedRecord(0)).values
        with self.assertRaises(ValueError):
            y[0] = 1.0

    def test_signal_shift(self):
        # Same noise with and without the signal
        null = make_signal(100, 0.0, (0, 100))
        alt = make_signal(100, 0.3, (10, 35))
        seed = SeedRecord(5)
        diff = sample(alt, seed).values - sample(null, seed).values
        np.testing.assert_allclose(diff, alt.mean_vector(), atol=1e-12)

    def test_null_mean(self):
        y = sample(make_signal(10000, 0.0, (0, 10000)), SeedRecord(1)).values
        self.assertLess(abs(np.mean(y)), 4 / math.sqrt(10000))
        self.assertLess(abs(np.std(y) - 1), 0.05)

    def test_support_mean(self):
        spec = make_signal(1000, 5.0 * math.sqrt(100 / 1000), (400, 500))
        self.assertAlmostEqual(spec.mu, 5.0)
        y = sample(spec, SeedRecord(2)).values
        self.assertLess(abs(np.mean(y[400:500]) - 5.0), 0.4)
        self.assertLess(abs(np.mean(y[:400])), 0.25)
        self.assertLess(abs(np.mean(y[500:])), 0.25)

    def test_batch_rows(self):
        spec = make_signal(50, 0.4, (5, 20))
        seed = SeedRecord(9, 0, STREAM_CALIBRATION)
        batch = sample_batch(spec, seed, range(3, 7))
        self.assertEqual(batch.shape, (4, 50))
        for row, r in enumerate(range(3, 7)):
            np.testing.assert_array_equal(batch[row], sample(spec, seed.at(r)).values)


class CumsumTest(MultiscanTestCase):
    def test_examples(self):
        s = cumsum(np.array([1.0, 2.0, 3.0]))
        self.assertEqual(list(s.s), [0.0, 1.0, 3.0, 6.0])
        self.assertEqual(s.n, 3)
        self.assertFalse(s.batched)
        self.assertEqual(list(cumsum(np.array([0.0])).s), [0.0, 0.0])

    def test_data_vector(self):
        dv = DataVector(np.array([1.0, -1.0]), SeedRecord(0))
        self.assertEqual(list(cumsum(dv).s), [0.0, 1.0, 0.0])

    def test_batched(self):
        s = cumsum(np.array([[1.0, 1.0], [2.0, -1.0]]))
        self.assertTrue(s.batched)
        self.assertEqual(s.n, 2)
        np.testing.assert_array_equal(s.s, [[0, 1, 2], [0, 2, 1]])

    def test_linear(self):
        rng = np.random.default_rng(0)
        a, b = rng.standard_normal(100), rng.standard_normal(100)
        np.testing.assert_allclose(
            cumsum(2 * a - 3 * b).s, 2 * cumsum(a).s - 3 * cumsum(b).s, atol=1e-10
        )


class ThresholdTest(MultiscanTestCase):
    def test_optimal_norm(self):
        self.assertEqual(optimal_norm(100, 1.0), 0.0)
        self.assertAlmostEqual(
            optimal_norm(10000, 0.5), math.sqrt(2 * math.log(2)) / 100
        )
        self.assertAlmostEqual(optimal_norm(100, 1.0, b=1.0), 0.1)
        with self.assertRaises(DomainError):
            optimal_norm(100, 0.0)

    def test_ordering(self):
        # The ALR threshold is sqrt(2) times the optimal one on small scales,
        # and both stay below the scan threshold until the scale reaches 1/n
        n = 10000
        for scale in [0.5, 0.1, 0.01]:
            opt = optimal_norm(n, scale)
            self.assertAlmostEqual(alr_small_scale_norm(n, scale), math.sqrt(2) * opt)
            self.assertLess(opt, scan_norm(n))
        self.assertAlmostEqual(optimal_norm(n, 1 / n), scan_norm(n))


if __name__ == "__main__":
    main()
