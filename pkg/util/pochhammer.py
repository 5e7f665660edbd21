"""
Pochhammer polynomials P_k(z) = prod_{r=1..k} (1 - z/r) = Gamma(k + 1 - z) / (Gamma(1 - z) k!)
"""
import logging
import math
from fractions import Fraction

import numpy as np
from scipy import special

from engine import app
from util.common import ConfigurationException, PoleException
from util.special_functions import gamma_complex, log_gamma_complex
from util.summation import compensated_sum

log = logging.getLogger(__name__)

INTEGER_TOLERANCE = 1e-9


def _validate_k(k, minimum=0):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < minimum:
        raise ConfigurationException('k must be an integer >= %d, got %r' % (minimum, k))
    return int(k)


def _positive_integer(z):
    """
    :return: m if z is exactly the positive integer m, else None
    """
    if z.imag == 0.0 and z.real >= 1.0 and z.real == math.floor(z.real):
        return int(z.real)
    return None


def _wrap_phase(phase):
    return math.atan2(math.sin(phase), math.cos(phase))


def _log_product(z, k):
    chunk = app.config['POCHHAMMER_CHUNK']
    if z.imag == 0.0:
        log_modulus, negatives = [], 0
        for start in range(1, k + 1, chunk):
            factors = 1.0 - z.real / np.arange(start, min(start + chunk, k + 1), dtype=np.float64)
            log_modulus.append(compensated_sum(np.log(np.abs(factors))))
            negatives += int(np.count_nonzero(factors < 0))
        return complex(math.fsum(log_modulus), math.pi if negatives % 2 else 0.0)

    log_modulus, phase = [], []
    for start in range(1, k + 1, chunk):
        logs = np.log(1.0 - z / np.arange(start, min(start + chunk, k + 1), dtype=np.float64))
        log_modulus.append(compensated_sum(logs.real))
        phase.append(compensated_sum(logs.imag))
    return complex(math.fsum(log_modulus), _wrap_phase(math.fsum(phase)))


def _log_gamma_ratio(z, k):
    """
    log Gamma(k + 1 - z) - log k! by Stirling's series in x = k + 1, accurate for |z| << k
    """
    x = float(k + 1)
    a = -z
    value = a * math.log(x) + (x + a - 0.5) * np.log1p(a / x) - a
    value += (1.0 / (x + a) - 1.0 / x) / 12.0
    value -= (1.0 / (x + a) ** 3 - 1.0 / x ** 3) / 360.0
    return complex(value)


def log_pochhammer(z, k):
    """
    :param z: complex argument, not a positive integer <= k
    :param k: k >= 0
    :return: log P_k(z) with the imaginary part in (-pi, pi]
    """
    z = complex(z)
    k = _validate_k(k)
    if k == 0:
        return 0j
    m = _positive_integer(z)
    if m is not None and m <= k:
        raise PoleException('P_%d(%d) = 0 has no logarithm' % (k, m), pole=m)
    if k <= app.config['POCHHAMMER_PRODUCT_MAX_K']:
        return _log_product(z, k)
    if m is not None:
        # 1 - z sits on a gamma pole, P_k(m) = (-1)^k C(m - 1, k)
        log_binom = special.gammaln(m) - special.gammaln(k + 1) - special.gammaln(m - k)
        return complex(log_binom, math.pi if k % 2 else 0.0)
    value = _log_gamma_ratio(z, k) - log_gamma_complex(1.0 - z)
    return complex(value.real, _wrap_phase(value.imag))


def pochhammer_base(z, k):
    """
    P_k(z) accumulated as log modulus and wrapped phase, exact 0 iff z is a positive integer <= k
    :param z: complex
    :param k: k >= 0
    :return: complex
    """
    z = complex(z)
    k = _validate_k(k)
    if k == 0:
        return 1 + 0j
    m = _positive_integer(z)
    if m is not None and m <= k:
        return 0j
    value = log_pochhammer(z, k)
    if z.imag == 0.0 and (m is not None or k <= app.config['POCHHAMMER_PRODUCT_MAX_K']):
        sign = -1.0 if value.imag else 1.0
        return complex(sign * math.exp(value.real), 0.0)
    return complex(np.exp(value))


def pochhammer_model(s, params, k):
    """
    P_k(s, alpha, beta) = P_k(z) with z = (s - alpha) / beta + 1
    """
    return pochhammer_base(params.reduced_argument(complex(s)), k)


def reciprocal_bd(z, k):
    """
    1 / P_k(z) as the partial fraction sum_{j=1..k} (-1)^j C(k, j) j / (z - j).
    Binomial cancellation limits it to k <= BINOMIAL_MAX_K.
    """
    z = complex(z)
    k = _validate_k(k, minimum=1)
    max_k = app.config['BINOMIAL_MAX_K']
    if k > max_k:
        raise ConfigurationException('The partial fraction form is limited to k <= %d, got %d' % (max_k, k))
    nearest = round(z.real)
    if 1 <= nearest <= k and abs(z - nearest) < INTEGER_TOLERANCE:
        raise PoleException('1/P_%d has a pole at z = %d' % (k, nearest), pole=int(nearest))

    # terms reach C(k, k/2) while the sum can be tiny, so it is accumulated in exact rationals
    x, y = Fraction(z.real), Fraction(z.imag)
    real, imag = Fraction(0), Fraction(0)
    binom = 1
    for j in range(1, k + 1):
        binom = binom * (k - j + 1) // j
        scale = (-1) ** j * binom * j / ((x - j) ** 2 + y ** 2)
        real += scale * (x - j)
        imag -= scale * y
    return complex(float(real), float(imag))


def pochhammer_asymptotic(z, k):
    """
    Large k surrogate k^-z / Gamma(1 - z) of P_k(z)
    """
    z = complex(z)
    k = _validate_k(k, minimum=1)
    return complex(np.exp(-z * math.log(k))) / gamma_complex(1.0 - z)
