import logging
import math
import unittest

import mock
import mpmath
import numpy as np
from scipy import special

from util.common import ConfigurationException, DomainException, PoleException, ZeroRefinementException
from util.special_functions import (build_zero_table, gamma_complex, hardy_z, log_gamma_complex,
                                    reciprocal_zeta_minus_one, zeta_complex, zeta_prime, zeta_prime_difference,
                                    zeta_real, _refine_zero)


logging.basicConfig()
log = logging.getLogger()
log.setLevel(logging.INFO)

mpmath.mp.dps = 30


def mp_complex(value):
    return complex(float(value.real), float(value.imag))


class ZetaTest(unittest.TestCase):
    def test_zeta_real(self):
        self.assertAlmostEqual(zeta_real(2), math.pi ** 2 / 6, places=14)
        self.assertAlmostEqual(zeta_real(4), math.pi ** 4 / 90, places=14)
        self.assertEqual(zeta_real(100), 1.0)

    def test_zeta_real_domain(self):
        for x in (1.0, 0.5, -2.0):
            with self.assertRaises(DomainException):
                zeta_real(x)

    def test_reciprocal_minus_one(self):
        self.assertAlmostEqual(reciprocal_zeta_minus_one(2), 6 / math.pi ** 2 - 1, places=15)
        # 1/zeta(60) - 1 formed directly rounds to 0
        self.assertAlmostEqual(reciprocal_zeta_minus_one(60) / -2.0 ** -60, 1.0, places=9)

    def test_zeta_complex_real_axis(self):
        value = zeta_complex(2)
        self.assertAlmostEqual(value.real, math.pi ** 2 / 6, places=13)
        self.assertAlmostEqual(value.imag, 0.0, places=13)

    def test_zeta_complex_against_mpmath(self):
        for s in (complex(0.75, 3.0), complex(2.0, 20.0), complex(0.5, 50.0), complex(0.3, -7.0)):
            expected = mp_complex(mpmath.zeta(mpmath.mpc(s.real, s.imag)))
            self.assertLess(abs(zeta_complex(s) - expected), 1e-10 * max(1.0, abs(expected)), s)

    def test_conjugate_symmetry(self):
        s = complex(0.6, 12.5)
        self.assertAlmostEqual(zeta_complex(s.conjugate()), zeta_complex(s).conjugate(), places=13)
        self.assertAlmostEqual(zeta_prime(s.conjugate()), zeta_prime(s).conjugate(), places=12)

    def test_zeta_prime_against_mpmath(self):
        for s in (complex(0.5, 14.134725141734693), complex(1.5, 2.0), complex(0.5, 30.0)):
            expected = mp_complex(mpmath.zeta(mpmath.mpc(s.real, s.imag), derivative=1))
            self.assertLess(abs(zeta_prime(s) - expected), 1e-9 * max(1.0, abs(expected)), s)

    def test_domain_and_pole(self):
        with self.assertRaises(DomainException):
            zeta_complex(complex(0.0, 5.0))
        with self.assertRaises(DomainException):
            zeta_complex(complex(-1.0, 5.0))
        with self.assertRaises(PoleException) as context:
            zeta_complex(1.0)
        self.assertEqual(context.exception.pole, 1)
        self.assertEqual(context.exception.to_dict()['pole'], 1)

    def test_singular_eta_denominator(self):
        with self.assertRaises(DomainException):
            zeta_complex(complex(1.0, 2 * math.pi / math.log(2.0)))

    def test_hardy_z_sign_change(self):
        self.assertLess(hardy_z(14.0) * hardy_z(14.3), 0)
        self.assertGreater(hardy_z(14.0) * hardy_z(14.1), 0)


class GammaTest(unittest.TestCase):
    def test_integers(self):
        self.assertAlmostEqual(gamma_complex(5).real, 24.0, places=12)
        self.assertAlmostEqual(gamma_complex(0.5).real, math.sqrt(math.pi), places=14)

    def test_against_mpmath(self):
        for z in (complex(0.3, 4.0), complex(-2.5, 1.0), complex(0.75, -7.067)):
            expected = mp_complex(mpmath.gamma(mpmath.mpc(z.real, z.imag)))
            self.assertLess(abs(gamma_complex(z) / expected - 1.0), 1e-11, z)

    def test_recurrence(self):
        rng = np.random.RandomState(3)
        for _ in range(200):
            z = complex(rng.uniform(0.5, 15), rng.uniform(-15, 15))
            self.assertLess(abs(gamma_complex(z + 1) / (z * gamma_complex(z)) - 1.0), 1e-11)

    def test_poles(self):
        for pole in (0, -3):
            with self.assertRaises(PoleException) as context:
                gamma_complex(complex(pole + 1e-12, 0.0))
            self.assertEqual(context.exception.pole, pole)
        with self.assertRaises(PoleException):
            log_gamma_complex(-2)
        # close to but not at a pole
        self.assertTrue(np.isfinite(gamma_complex(complex(-3.0, 1e-6))))

    def test_log_gamma(self):
        self.assertAlmostEqual(log_gamma_complex(10.5).real, special.gammaln(10.5), places=12)
        z = complex(0.75, -7.067)
        self.assertAlmostEqual(abs(np.exp(log_gamma_complex(z)) - gamma_complex(z)), 0.0, places=15)


class ZeroTableTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.zeros = build_zero_table(5)

    def test_first_zero(self):
        self.assertAlmostEqual(self.zeros.first.ordinate, 14.134725141734693, places=9)

    def test_ordinates_against_mpmath(self):
        for index, record in enumerate(self.zeros):
            expected = float(mpmath.zetazero(index + 1).imag)
            self.assertAlmostEqual(record.ordinate, expected, places=9)

    def test_derivatives_against_mpmath(self):
        for record in self.zeros:
            expected = mp_complex(mpmath.zeta(mpmath.mpc(0.5, record.ordinate), derivative=1))
            self.assertLess(abs(record.zeta_prime - expected), 1e-8)
        self.assertAlmostEqual(abs(self.zeros.first.zeta_prime), 0.7931604, places=6)

    def test_ascending_and_read_only(self):
        self.assertTrue(np.all(np.diff(self.zeros.ordinates) > 0))
        with self.assertRaises(ValueError):
            self.zeros.ordinates[0] = 0.0

    def test_head(self):
        head = self.zeros.head(2)
        self.assertEqual(head.count, 2)
        self.assertEqual(head[1], self.zeros[1])
        with self.assertRaises(ConfigurationException):
            self.zeros.head(0)
        with self.assertRaises(ConfigurationException):
            self.zeros.head(6)

    def test_cached(self):
        self.assertIs(build_zero_table(5), self.zeros)

    def test_count_limits(self):
        for count in (0, 31, 2.5):
            with self.assertRaises(ConfigurationException):
                build_zero_table(count)

    def test_seed_without_zero(self):
        with mock.patch('util.special_functions.ZERO_SEEDS', (16.0,)):
            with self.assertRaises(ZeroRefinementException) as context:
                _refine_zero(0)
        self.assertEqual(context.exception.seed_index, 0)
        self.assertEqual(context.exception.exit_code, 1)

    def test_derivative_matches_central_difference(self):
        for record in self.zeros:
            s = complex(0.5, record.ordinate)
            difference = zeta_prime_difference(s)
            self.assertLess(abs(record.zeta_prime - difference) / abs(record.zeta_prime), 1e-5)
        s = complex(2.0, 3.0)
        self.assertLess(abs(zeta_prime(s) - zeta_prime_difference(s)), 1e-8)

    def test_derivative_disagreeing_with_difference(self):
        with mock.patch('util.special_functions.zeta_prime', return_value=complex(0.5, 0.5)):
            with self.assertRaises(ZeroRefinementException) as context:
                _refine_zero(1)
        self.assertEqual(context.exception.seed_index, 1)
        self.assertIn('central difference', context.exception.message)
