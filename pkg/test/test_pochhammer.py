import logging
import math
import unittest

import mock
import mpmath
import numpy as np

from engine import app
from util.coefficients import ModelParams
from util.common import ConfigurationException, PoleException
from util.pochhammer import (log_pochhammer, pochhammer_asymptotic, pochhammer_base, pochhammer_model,
                             reciprocal_bd)
from util.special_functions import gamma_complex


logging.basicConfig()
log = logging.getLogger()
log.setLevel(logging.INFO)

FIRST_ZERO_ARGUMENT = complex(0.25, -7.067)


def mp_pochhammer(z, k):
    with mpmath.workdps(40):
        value = mpmath.rf(1 - mpmath.mpc(z.real, z.imag), k) / mpmath.factorial(k)
        return complex(float(value.real), float(value.imag))


class PochhammerTest(unittest.TestCase):
    def test_trivial_values(self):
        self.assertEqual(pochhammer_base(0, 17), 1.0)
        self.assertEqual(pochhammer_base(complex(3.0, 4.0), 0), 1.0)
        self.assertEqual(pochhammer_base(1, 5), 0.0)
        self.assertEqual(pochhammer_base(2, 1), -1.0)
        self.assertAlmostEqual(pochhammer_base(0.5, 3), 0.3125, places=15)
        self.assertAlmostEqual(pochhammer_base(-1, 3).real, 4.0, places=14)

    def test_roots(self):
        for m in range(1, 8):
            self.assertEqual(pochhammer_base(m, 7), 0.0)
        self.assertNotEqual(pochhammer_base(8, 7), 0.0)
        with self.assertRaises(PoleException) as context:
            log_pochhammer(3, 5)
        self.assertEqual(context.exception.pole, 3)

    def test_real_sign(self):
        # P_20(25) = (-1)^20 C(24, 20)
        self.assertAlmostEqual(pochhammer_base(25, 20).real, 10626.0, places=8)
        self.assertAlmostEqual(pochhammer_base(25, 21).real, -10626.0 * 4 / 21, places=8)
        self.assertEqual(pochhammer_base(2.5, 10).imag, 0.0)

    def test_against_mpmath(self):
        for z in (FIRST_ZERO_ARGUMENT, complex(-3.0, 2.0), complex(0.6, 25.0)):
            for k in (10, 1000, 10 ** 5):
                expected = mp_pochhammer(z, k)
                self.assertLess(abs(pochhammer_base(z, k) / expected - 1.0), 1e-10, (z, k))

    def test_conjugation(self):
        z = complex(0.4, 3.3)
        self.assertAlmostEqual(pochhammer_base(z.conjugate(), 500), pochhammer_base(z, 500).conjugate(), places=14)

    def test_no_overflow(self):
        value = pochhammer_base(complex(-40.0, 1.0), 10 ** 6)
        self.assertTrue(np.isfinite(value))
        self.assertAlmostEqual(log_pochhammer(complex(-40.0, 1.0), 10 ** 6).real, math.log(abs(value)), places=8)

    def test_gamma_path_matches_product(self):
        for z in (FIRST_ZERO_ARGUMENT, complex(0.5, 0.0), complex(-2.5, 4.0)):
            product = log_pochhammer(z, 5000)
            with mock.patch.dict(app.config, {'POCHHAMMER_PRODUCT_MAX_K': 1000}):
                stirling = log_pochhammer(z, 5000)
            self.assertAlmostEqual(stirling.real, product.real, places=9)
            self.assertAlmostEqual(math.cos(stirling.imag - product.imag), 1.0, places=12)

    def test_gamma_path_integer_argument(self):
        with mock.patch.dict(app.config, {'POCHHAMMER_PRODUCT_MAX_K': 10}):
            self.assertAlmostEqual(pochhammer_base(25, 20).real, 10626.0, places=6)
            self.assertLess(pochhammer_base(25, 21).real, 0.0)

    def test_bounded_decay(self):
        z = complex(0.4, 3.0)
        scaled = [abs(pochhammer_base(z, 10 ** e)) * (10 ** e) ** z.real for e in range(1, 7)]
        self.assertLess(max(scaled) / min(scaled), 10.0)

    def test_model(self):
        params = ModelParams(2.0, 2.0)
        self.assertEqual(pochhammer_model(0.0, params, 50), 1.0)
        strong = ModelParams(3.5, 4.0)
        self.assertEqual(pochhammer_model(strong.alpha - strong.beta, strong, 9), 1.0)
        self.assertEqual(pochhammer_model(strong.alpha + strong.beta * 2, strong, 9), 0.0)
        self.assertEqual(pochhammer_model(0.5, strong, 9), pochhammer_base(strong.reduced_argument(0.5), 9))

    def test_invalid_k(self):
        for k in (-1, 2.0, None):
            with self.assertRaises(ConfigurationException):
                pochhammer_base(0.5, k)


class ReciprocalTest(unittest.TestCase):
    def test_hand_value(self):
        self.assertAlmostEqual(reciprocal_bd(3, 1).real, -0.5, places=15)
        self.assertAlmostEqual(reciprocal_bd(3, 1) * pochhammer_base(3, 1), 1.0, places=15)

    def test_identity(self):
        for z, k, tolerance in ((complex(0.25, 7.067), 5, 1e-10), (0.75, 20, 1e-8), (complex(-6.0, 0.5), 20, 1e-8)):
            self.assertLess(abs(pochhammer_base(z, k) * reciprocal_bd(z, k) - 1.0), tolerance, (z, k))

    def test_random_identity(self):
        rng = np.random.RandomState(11)
        for _ in range(200):
            z = complex(rng.uniform(-10, 10), rng.uniform(-10, 10))
            k = int(rng.randint(1, 21))
            if abs(z.imag) < 1e-3 and abs(z.real - round(z.real)) < 1e-3:
                continue
            self.assertLess(abs(pochhammer_base(z, k) * reciprocal_bd(z, k) - 1.0), 1e-8, (z, k))

    def test_poles_and_limits(self):
        with self.assertRaises(PoleException) as context:
            reciprocal_bd(4, 6)
        self.assertEqual(context.exception.pole, 4)
        self.assertTrue(np.isfinite(reciprocal_bd(7, 6)))
        with self.assertRaises(ConfigurationException):
            reciprocal_bd(0.5, 0)
        with self.assertRaises(ConfigurationException):
            reciprocal_bd(0.5, app.config['BINOMIAL_MAX_K'] + 1)


class AsymptoticTest(unittest.TestCase):
    def test_origin(self):
        self.assertAlmostEqual(pochhammer_asymptotic(0, 1000), 1.0, places=14)

    def test_convergence(self):
        gaps = []
        for e in range(2, 7):
            k = 10 ** e
            gaps.append(abs(pochhammer_asymptotic(FIRST_ZERO_ARGUMENT, k) / pochhammer_base(FIRST_ZERO_ARGUMENT, k)
                            - 1.0))
        self.assertTrue(all(b < a for a, b in zip(gaps, gaps[1:])), gaps)
        self.assertLess(gaps[-1], 0.02)

    def test_half(self):
        exact = pochhammer_base(0.5, 10 ** 4)
        self.assertLess(abs(pochhammer_asymptotic(0.5, 10 ** 4) / exact - 1.0), 0.01)

    def test_gamma_pole(self):
        with self.assertRaises(PoleException):
            pochhammer_asymptotic(1, 10)

    def test_matches_gamma_limit(self):
        z = complex(0.3, -2.0)
        k = 10 ** 6
        limit = pochhammer_base(z, k) * np.exp(z * math.log(k)) * gamma_complex(1.0 - z)
        self.assertLess(abs(limit - 1.0), 1e-4)
