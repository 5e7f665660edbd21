"""
Zeta, its derivative and gamma in binary64, plus the table of nontrivial zeros used by the wave.

zeta_complex and zeta_prime sum the alternating (eta) series with Borwein weights,
zeta(s) = eta(s) / (1 - 2^(1-s)), with enough terms for 16 digits at the given height.
"""
import logging
import math
from collections import namedtuple
from threading import Lock

import numpy as np
from cachetools import cached, LRUCache
from scipy import optimize, special

from engine import app
from util.common import ConfigurationException, DomainException, PoleException, ZeroRefinementException, log_timing
from util.summation import compensated_complex_sum

log = logging.getLogger(__name__)

LN2 = math.log(2.0)
LN_PI = math.log(math.pi)
# Each Borwein term buys ln(3 + sqrt(8)) nats of accuracy
BORWEIN_RATE = math.log(3.0 + math.sqrt(8.0))
POLE_TOLERANCE = 1e-8
GAMMA_POLE_TOLERANCE = 1e-9
SIMPLE_ZERO_FLOOR = 1e-3
# Central difference step and the relative agreement required of zeta' at a refined zero
DERIVATIVE_STEP = 1e-6
DERIVATIVE_TOLERANCE = 1e-5

# Ordinates of the first 30 nontrivial zeros to 3 decimals, refined at table build
ZERO_SEEDS = (
    14.135, 21.022, 25.011, 30.425, 32.935, 37.586, 40.919, 43.327, 48.005, 49.774,
    52.970, 56.446, 59.347, 60.832, 65.113, 67.080, 69.546, 72.067, 75.705, 77.145,
    79.337, 82.910, 84.735, 87.425, 88.809, 92.492, 94.651, 95.871, 98.831, 101.318,
)

ZeroRecord = namedtuple('ZeroRecord', ['ordinate', 'zeta_prime'])


class ZeroTable(object):
    """
    Refined zeros 1/2 + i t in ascending order of t, with zeta' at each zero
    """

    def __init__(self, records):
        self.records = tuple(records)
        self.ordinates = np.array([r.ordinate for r in self.records], dtype=np.float64)
        self.zeta_primes = np.array([r.zeta_prime for r in self.records], dtype=np.complex128)
        self.ordinates.setflags(write=False)
        self.zeta_primes.setflags(write=False)

    @property
    def count(self):
        return len(self.records)

    @property
    def first(self):
        return self.records[0]

    def head(self, count):
        """
        :return: table holding the first count zeros
        """
        if count < 1 or count > self.count:
            raise ConfigurationException('Zero count %r outside 1..%d' % (count, self.count))
        return ZeroTable(self.records[:count])

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, index):
        return self.records[index]

    def __repr__(self):
        return 'ZeroTable(count=%d)' % self.count


def zeta_real(x):
    """
    :param x: real argument > 1
    :return: zeta(x)
    """
    x = float(x)
    if x <= 1.0:
        raise DomainException('zeta_real requires x > 1, got %r' % x)
    return 1.0 + float(special.zetac(x))


def reciprocal_zeta_minus_one(x):
    """
    1/zeta(x) - 1 without the cancellation of forming 1/zeta(x) first, x > 1
    """
    x = float(x)
    if x <= 1.0:
        raise DomainException('reciprocal_zeta_minus_one requires x > 1, got %r' % x)
    tail = float(special.zetac(x))
    return -tail / (1.0 + tail)


def _borwein_terms(s):
    if s.real <= 0:
        raise DomainException('zeta is only evaluated for re(s) > 0, got %r' % (s,))
    if abs(s - 1.0) < POLE_TOLERANCE:
        raise PoleException('zeta has a pole at s = 1, got %r' % (s,), pole=1)
    digits = app.config['ZETA_DIGITS']
    height = abs(s.imag)
    n = int(math.ceil((0.5 * math.pi * height + digits * math.log(10.0) + math.log(3.0 * (1.0 + 2.0 * height)))
                      / BORWEIN_RATE)) + 10

    # t_i / t_(i-1) = 4 (n + i - 1)(n - i + 1) / ((2i)(2i - 1)), kept in log space
    i = np.arange(1, n + 1, dtype=np.float64)
    log_ratio = np.log(4.0 * (n + i - 1.0) * (n - i + 1.0)) - np.log(2.0 * i * (2.0 * i - 1.0))
    log_t = np.concatenate(([0.0], np.cumsum(log_ratio)))
    d = np.cumsum(np.exp(log_t - log_t.max()))
    weights = (d[-1] - d[:-1]) / d[-1]

    k = np.arange(n, dtype=np.float64)
    log_n = np.log1p(k)
    signed = np.where(k % 2 == 0, 1.0, -1.0) * weights
    powers = np.exp(-s * log_n)

    denominator = -np.expm1((1.0 - s) * LN2)
    if abs(denominator) < POLE_TOLERANCE:
        raise DomainException('eta representation is singular at s = %r (2^(1-s) = 1)' % (s,))
    return signed, log_n, powers, denominator


def zeta_complex(s):
    """
    :param s: complex argument with re(s) > 0, s != 1
    :return: zeta(s)
    """
    s = complex(s)
    signed, _, powers, denominator = _borwein_terms(s)
    eta = compensated_complex_sum(signed * powers)
    return eta / denominator


def zeta_prime(s):
    """
    Derivative of zeta from the term-wise derivative of the eta series and the prefactor:
    zeta' = eta' / D - eta 2^(1-s) ln 2 / D^2 with D = 1 - 2^(1-s)
    """
    s = complex(s)
    signed, log_n, powers, denominator = _borwein_terms(s)
    eta = compensated_complex_sum(signed * powers)
    eta_prime = -compensated_complex_sum(signed * log_n * powers)
    two_power = 1.0 - denominator
    return eta_prime / denominator - eta * two_power * LN2 / denominator ** 2


def zeta_prime_difference(s, step=DERIVATIVE_STEP):
    """
    Central finite difference of zeta along the real axis, the cross-check for zeta_prime
    """
    s = complex(s)
    return (zeta_complex(s + step) - zeta_complex(s - step)) / (2.0 * step)


def _check_gamma_pole(z):
    nearest = round(z.real)
    if nearest <= 0 and abs(z - nearest) < GAMMA_POLE_TOLERANCE:
        raise PoleException('gamma has a pole at %d, got %r' % (nearest, z), pole=int(nearest))


def gamma_complex(z):
    """
    :param z: complex argument, not within 1e-9 of a non-positive integer
    :return: Gamma(z)
    """
    z = complex(z)
    _check_gamma_pole(z)
    return complex(special.gamma(z))


def log_gamma_complex(z):
    """
    Principal branch of log Gamma(z), continuous off the negative real axis
    """
    z = complex(z)
    _check_gamma_pole(z)
    return complex(special.loggamma(z))


def riemann_siegel_theta(t):
    return special.loggamma(0.25 + 0.5j * t).imag - 0.5 * t * LN_PI


def hardy_z(t):
    """
    Real valued Z(t) = e^(i theta(t)) zeta(1/2 + i t), changes sign at every simple zero on the critical line
    """
    t = float(t)
    value = np.exp(1j * riemann_siegel_theta(t)) * zeta_complex(complex(0.5, t))
    return float(value.real)


def _refine_zero(index):
    seed = ZERO_SEEDS[index]
    bracket = app.config['ZERO_BRACKET']
    tolerance = app.config['ZERO_TOLERANCE']
    lo, hi = seed - bracket, seed + bracket
    z_lo, z_hi = hardy_z(lo), hardy_z(hi)
    if z_lo * z_hi > 0:
        raise ZeroRefinementException('No sign change of Z(t) in [%.3f, %.3f] around seed %d'
                                      % (lo, hi, index), seed_index=index)

    ordinate = optimize.brentq(hardy_z, lo, hi, xtol=1e-12)
    s = complex(0.5, ordinate)
    residual = abs(zeta_complex(s))
    if residual >= tolerance:
        raise ZeroRefinementException('Zero %d refined to t=%.12f but |zeta| = %.3g >= %g'
                                      % (index, ordinate, residual, tolerance), seed_index=index)
    derivative = zeta_prime(s)
    if abs(derivative) <= SIMPLE_ZERO_FLOOR:
        raise ZeroRefinementException('Zero %d at t=%.12f has |zeta\'| = %.3g, not a simple zero'
                                      % (index, ordinate, abs(derivative)), seed_index=index)
    difference = zeta_prime_difference(s)
    mismatch = abs(derivative - difference) / abs(derivative)
    if mismatch > DERIVATIVE_TOLERANCE:
        raise ZeroRefinementException('Zero %d at t=%.12f: zeta\' = %r but the central difference gives %r'
                                      % (index, ordinate, derivative, difference), seed_index=index)
    log.debug('Zero %d: t=%.12f |zeta|=%.2e zeta\'=%r', index, ordinate, residual, derivative)
    return ZeroRecord(ordinate, derivative)


@cached(LRUCache(maxsize=app.config['MAX_ZEROS']), lock=Lock())
@log_timing(log)
def build_zero_table(count):
    """
    Refine the first count embedded seeds and attach zeta' at each zero
    :param count: 1 <= count <= MAX_ZEROS
    :return: ZeroTable
    """
    max_zeros = app.config['MAX_ZEROS']
    if not isinstance(count, (int, np.integer)) or count < 1 or count > min(max_zeros, len(ZERO_SEEDS)):
        raise ConfigurationException('Zero count must be between 1 and %d, got %r' % (max_zeros, count))
    return ZeroTable(_refine_zero(index) for index in range(int(count)))
