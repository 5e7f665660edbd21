"""
Scan based checks at desk scale. Each takes minutes, set RHWAVE_SLOW_TESTS to run them.
"""
import logging
import math
import os
import unittest

import numpy as np

from util.bounds import absolute_bound_monitor
from util.coefficients import ModelParams
from util.mobius import build_sieve
from util.scanner import ScanConfig, beta_sweep, extract_features, first_crossing_x, predicted_period, run_scan
from util.special_functions import build_zero_table


logging.basicConfig()
log = logging.getLogger()
log.setLevel(logging.INFO)

RIESZ_AMPLITUDE = 0.000078
RIESZ_DIP = -0.4946
ARM_IN_ARM_AMPLITUDE = 0.0052445


@unittest.skipUnless(os.getenv('RHWAVE_SLOW_TESTS'), 'slow: set RHWAVE_SLOW_TESTS to run')
class AcceptanceTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.table = build_sieve(10 ** 6)
        cls.zeros = build_zero_table(1)

    def test_riesz_wave(self):
        params = ModelParams(2.0, 2.0)
        config = ScanConfig(params, k_min=1, k_max=10 ** 6, points=400, sieve_limit=self.table.limit,
                            tail_corrected=True)
        samples = run_scan(config, self.table, self.zeros)

        deepest = min(samples, key=lambda sample: sample.psi)
        self.assertEqual(deepest.k, 4)
        self.assertAlmostEqual(deepest.psi, RIESZ_DIP, delta=5e-4)
        onset_k = math.exp(first_crossing_x([sample for sample in samples if sample.k >= 100]))
        self.assertTrue(2e4 / 1.5 <= onset_k <= 2e4 * 1.5, onset_k)

        period = predicted_period(params, self.zeros)
        self.assertAlmostEqual(period, 4 * math.pi / 14.134725141734693, places=9)
        features = extract_features(samples, period_hint=period)
        self.assertAlmostEqual(features.measured_amplitude / RIESZ_AMPLITUDE, 1.0, delta=0.25)
        self.assertAlmostEqual(features.measured_period_x / period, 1.0, delta=0.05)

        monitor = absolute_bound_monitor(samples)
        self.assertFalse(monitor.exceeded)

    def test_arm_in_arm(self):
        config = ScanConfig(ModelParams(2.0, 4.0), k_min=10 ** 6, k_max=10 ** 7, points=100,
                            sieve_limit=self.table.limit, tail_corrected=True, trivial_zeros=3)
        samples = run_scan(config, self.table, self.zeros)
        gap = max(abs(sample.psi - sample.psi_bar) for sample in samples)
        self.assertLess(gap, 0.2 * ARM_IN_ARM_AMPLITUDE)

    def test_arm_in_arm_needs_trivial_zero(self):
        # the -2 term fades like k^(-5/8) and is about a quarter of the wave at k = 10^6
        config = ScanConfig(ModelParams(2.0, 4.0), k_min=10 ** 6, k_max=10 ** 6, points=2,
                            sieve_limit=self.table.limit)
        sample = run_scan(config, self.table, self.zeros)[0]
        self.assertGreater(abs(sample.psi - sample.psi_bar), 0.1 * ARM_IN_ARM_AMPLITUDE)

    def test_strong_coupling(self):
        sweep = beta_sweep(3.5, [4, 8, 12, 20], 10 ** 7, self.table, self.zeros, points=200)
        self.assertLess(float(np.nanmax(np.abs(sweep.dataset['c_k'].values))), 0.11247897)
        onsets = [sweep.onsets[beta] for beta in (4.0, 8.0, 12.0, 20.0)]
        finite = [x for x in onsets if math.isfinite(x)]
        self.assertTrue(finite, onsets)
        self.assertEqual(onsets[:len(finite)], finite)
        self.assertTrue(all(b > a for a, b in zip(finite, finite[1:])), onsets)
