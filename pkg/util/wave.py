"""
Asymptotic wave of the critical function built from the nontrivial zeros.

The exact relation beta k c_(k-1) = sum over zeros z of 1 / (zeta'(z) P_k((z - alpha)/beta + 1)),
with 1/P_k(z) ~ Gamma(1 - z) k^z, gives for a zero 1/2 + i t
    (1/beta) k^(it/beta) Gamma((alpha - 1/2 - it) / beta) / zeta'(1/2 + it)
plus the conjugate term, i.e. (2/beta) Re[...] per tabulated zero. The trivial zero -2n adds
    Gamma((2n + alpha) / beta) k^(-(2n + 1/2)/beta) / (beta zeta'(-2n))
which fades with k and is left out unless asked for.
"""
import logging
import math
from collections import namedtuple

import numpy as np
from scipy import special

from util.coefficients import c_direct, tail_correction_applies
from util.common import ConfigurationException, PoleException
from util.pochhammer import log_pochhammer
from util.special_functions import gamma_complex
from util.summation import compensated_sum

log = logging.getLogger(__name__)

WavePrediction = namedtuple('WavePrediction', ['amplitude', 'period_x', 'zeros_used'])
ZeroAmplitude = namedtuple('ZeroAmplitude', ['ordinate', 'amplitude', 'period_x'])


def _require_zeros(zeros):
    if zeros is None or zeros.count < 1:
        raise ConfigurationException('At least one zero is required')


def _validate_k(k, minimum):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < minimum:
        raise ConfigurationException('k must be an integer >= %d, got %r' % (minimum, k))
    return int(k)


def gamma_weights(params, zeros):
    """
    Gamma((alpha - 1/2 - it) / beta) / zeta'(1/2 + it) for every tabulated zero
    """
    _require_zeros(zeros)
    weights = np.empty(zeros.count, dtype=np.complex128)
    for index, record in enumerate(zeros):
        argument = (params.alpha - 0.5 - 1j * record.ordinate) / params.beta
        try:
            weights[index] = gamma_complex(argument) / record.zeta_prime
        except PoleException as e:
            raise PoleException('Gamma pole at the wave argument of zero %d (t=%.9f): %s'
                                % (index, record.ordinate, e.message), pole=e.pole,
                                payload={'zero_index': index})
    return weights


class AsymptoticWave(object):
    """
    psi_bar for one model and zero set, evaluated at one k or an array of k.
    trivial_zeros > 0 adds the fading terms of the trivial zeros -2, ..., -2 trivial_zeros.
    """

    def __init__(self, params, zeros, trivial_zeros=0):
        if trivial_zeros < 0:
            raise ConfigurationException('trivial_zeros must be non-negative, got %r' % (trivial_zeros,))
        self.params = params
        self.zeros = zeros
        self.trivial_zeros = trivial_zeros
        self.weights = gamma_weights(params, zeros)
        self.frequencies = zeros.ordinates / params.beta

        orders = np.arange(1, trivial_zeros + 1)
        derivatives = [_trivial_zero_log_derivative(n) for n in orders]
        self.trivial_signs = np.array([sign for sign, _ in derivatives])
        self.trivial_log_weights = (special.gammaln((2.0 * orders + params.alpha) / params.beta)
                                    - math.log(params.beta)
                                    - np.array([log_magnitude for _, log_magnitude in derivatives]))
        self.trivial_rates = (2.0 * orders + 0.5) / params.beta

    def at_x(self, x):
        x = np.asarray(x, dtype=np.float64)
        phases = np.exp(1j * np.multiply.outer(x, self.frequencies))
        wave = (2.0 / self.params.beta) * np.real(phases @ self.weights)
        if self.trivial_zeros:
            fading = np.exp(self.trivial_log_weights - np.multiply.outer(x, self.trivial_rates))
            wave = wave + fading @ self.trivial_signs
        return wave

    def __call__(self, k):
        k = np.asarray(k, dtype=np.float64)
        if np.any(k < 2):
            raise ConfigurationException('psi_bar is defined for k >= 2')
        return self.at_x(np.log(k))


def psi_bar(params, k, zeros, trivial_zeros=0):
    """
    :param params: ModelParams
    :param k: k >= 2
    :param zeros: ZeroTable
    :param trivial_zeros: number of trivial zeros added to the wave
    :return: the asymptotic wave at k, exactly real
    """
    k = _validate_k(k, 2)
    return float(AsymptoticWave(params, zeros, trivial_zeros)(k))


def zero_amplitudes(params, zeros):
    """
    :return: ZeroAmplitude per tabulated zero, (2/beta) |Gamma| / |zeta'| and period 2 pi beta / t
    """
    weights = gamma_weights(params, zeros)
    return [ZeroAmplitude(record.ordinate,
                          2.0 / params.beta * abs(weight),
                          2.0 * math.pi * params.beta / record.ordinate)
            for record, weight in zip(zeros, weights)]


def first_zero_amplitude(params, zeros):
    """
    Amplitude and wavelength in x = ln k of the first zero's contribution
    :return: WavePrediction
    """
    first = zero_amplitudes(params, zeros.head(1))[0]
    return WavePrediction(first.amplitude, first.period_x, 1)


def _trivial_zero_log_derivative(n):
    """
    zeta'(-2n) = (-1)^n (2n)! zeta(2n + 1) / (2 (2 pi)^2n) as (sign, log |zeta'(-2n)|)
    """
    if n < 1:
        raise ConfigurationException('Trivial zeros are indexed from 1, got %r' % (n,))
    log_magnitude = (special.gammaln(2 * n + 1) + math.log1p(float(special.zetac(2 * n + 1)))
                     - math.log(2.0) - 2 * n * math.log(2.0 * math.pi))
    return (-1.0 if n % 2 else 1.0), float(log_magnitude)


def trivial_zero_derivative(n):
    sign, log_magnitude = _trivial_zero_log_derivative(n)
    return sign * math.exp(log_magnitude)


def _zero_sum(params, k, zeros, trivial_zeros=0):
    """
    sum over zeros (both half planes) of 1 / (zeta'(z) P_k((z - alpha)/beta + 1)), plus the
    trivial zeros -2, ..., -2 trivial_zeros. Their reduced arguments are below 1, never a root of P_k.
    """
    terms = []
    for n in range(1, trivial_zeros + 1):
        reduced = params.reduced_argument(-2.0 * n)
        terms.append(math.exp(-log_pochhammer(reduced, k).real) / trivial_zero_derivative(n))
    for record in zeros:
        z = complex(0.5, record.ordinate)
        reduced = params.reduced_argument(z)
        reciprocal = np.exp(-log_pochhammer(reduced, k)) / record.zeta_prime
        terms.append(2.0 * reciprocal.real)
    return compensated_sum(terms)


def psi_bar_exact(params, k, zeros, trivial_zeros=0):
    """
    Wave from the exact zero sum with P_(k+1) in place of its gamma limit:
    c_k = 1/(beta (k+1)) sum 1/(zeta' P_(k+1)), scaled by k^((alpha - 1/2)/beta) like psi_bar
    """
    k = _validate_k(k, 2)
    _require_zeros(zeros)
    c_k = _zero_sum(params, k + 1, zeros, trivial_zeros) / (params.beta * (k + 1))
    return c_k * float(k) ** ((params.alpha - 0.5) / params.beta)


def bd_identity_residual(params, k, zeros, table, trivial_zeros=0):
    """
    Relative gap between beta k c_(k-1) from the sieve and the zero sum with exact P_k.
    Trivial zero terms fade like k^(-(2n + 1/2)/beta) relative to the wave. The sieve sum
    includes the terms beyond the sieve whenever tail_correction can supply them.
    :return: |lhs - rhs| / |lhs|
    """
    k = _validate_k(k, 2)
    _require_zeros(zeros)
    corrected = tail_correction_applies(params, k - 1, table.limit)
    lhs = params.beta * k * c_direct(params, k - 1, table, tail_corrected=corrected).value
    rhs = _zero_sum(params, k, zeros, trivial_zeros)
    log.debug('Identity at k=%d with %d zeros and %d trivial zeros: lhs=%.6g rhs=%.6g',
              k, zeros.count, trivial_zeros, lhs, rhs)
    if lhs == 0.0:
        return float('inf')
    return abs(lhs - rhs) / abs(lhs)
