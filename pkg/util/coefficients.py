"""
Coefficients c_k(alpha, beta) of the Pochhammer expansion of 1/zeta, the critical function
psi and the Riesz function.

Three ways to compute c_k:
    direct       sum mu(n) n^-alpha (1 - n^-beta)^k over the sieve
    exponential  sum mu(n) n^-alpha exp(-k n^-beta) over the sieve
    binomial     sum (-1)^j C(k, j) / zeta(alpha + beta j), small k only

The sieve sums skip the leading n whose weight underflows (k n^-beta > WINDOW_THRESHOLD)
and are summed with math.fsum. While k limit^-beta is small the terms beyond the sieve are
recovered from 1/zeta(alpha), see tail_correction.
"""
import logging
import math
from collections import namedtuple
from threading import Lock

import numexpr
import numpy as np
from cachetools import cached, LRUCache
from cachetools.keys import hashkey
from scipy import special, stats

from engine import app
from util.common import ConfigurationException, DomainException
from util.special_functions import reciprocal_zeta_minus_one
from util.summation import KahanSum, compensated_sum

log = logging.getLogger(__name__)

DIRECT = 'direct'
EXPONENTIAL = 'exponential'
BINOMIAL = 'binomial'
METHODS = (DIRECT, EXPONENTIAL, BINOMIAL)
METHOD_ALIASES = {'exp': EXPONENTIAL}

# Above this x the Riesz power series loses more than a few digits to cancellation
RIESZ_SERIES_MAX_X = 10.0
RIESZ_RELATIVE_STOP = 1e-16

CoefficientResult = namedtuple('CoefficientResult', ['value', 'tail_bound', 'terms_used', 'method'])


class ModelParams(namedtuple('ModelParams', ['alpha', 'beta', 'rho'])):
    """
    One expansion model (alpha, beta) with the abscissa rho of the critical function.
    alpha in (1/2, 1] is accepted as an exploratory model: the expansion is not known to
    converge there and the truncation bound is infinite.
    """
    __slots__ = ()

    def __new__(cls, alpha, beta, rho=0.5):
        try:
            alpha, beta, rho = float(alpha), float(beta), float(rho)
        except (TypeError, ValueError):
            raise ConfigurationException('Model parameters must be numbers, got alpha=%r beta=%r rho=%r'
                                         % (alpha, beta, rho))
        if not all(math.isfinite(v) for v in (alpha, beta, rho)):
            raise ConfigurationException('Model parameters must be finite')
        if beta <= 0:
            raise ConfigurationException('beta must be positive, got %r' % beta)
        if alpha <= 0.5:
            raise ConfigurationException('alpha must exceed 1/2, got %r' % alpha)
        if alpha <= 1.0:
            log.warning('Exploratory model alpha=%g beta=%g: alpha <= 1, truncation bounds are infinite',
                        alpha, beta)
        return super(ModelParams, cls).__new__(cls, alpha, beta, rho)

    @property
    def exploratory(self):
        return self.alpha <= 1.0

    @property
    def psi_exponent(self):
        return (self.alpha - self.rho) / self.beta

    def reduced_argument(self, s):
        """
        z = (s - alpha) / beta + 1
        """
        return (s - self.alpha) / self.beta + 1.0

    def as_dict(self):
        return dict(alpha=self.alpha, beta=self.beta, rho=self.rho)


class DirichletSeries(object):
    """
    Per (sieve, alpha, beta) arrays over the squarefree n >= 2 of the sieve:
    coeff = mu(n) n^-alpha, decay = log1p(-n^-beta) and rate = n^-beta.
    About 32 bytes per squarefree n, i.e. roughly 20 bytes per sieve entry.
    """

    def __init__(self, table, alpha, beta):
        n = table.support()
        n = n[n >= 2]
        nf = n.astype(np.float64)
        self.limit = table.limit
        self.alpha = alpha
        self.beta = beta
        self.n = n
        self.coeff = table.values[n].astype(np.float64) * nf ** -alpha
        self.rate = nf ** -beta
        self.decay = np.log1p(-self.rate)
        self._tail = None
        for array in (self.n, self.coeff, self.rate, self.decay):
            array.setflags(write=False)

    def window_start(self, k):
        """
        :return: index of the first n with k n^-beta <= WINDOW_THRESHOLD
        """
        if k <= 0:
            return 0
        threshold = app.config['WINDOW_THRESHOLD'] / float(k)
        # rate decreases with n
        return self.rate.size - int(np.searchsorted(self.rate[::-1], threshold, side='right'))

    def tail(self):
        """
        sum mu(n) n^-alpha over n > limit, as 1/zeta(alpha) minus the sieve part
        """
        if self._tail is None:
            self._tail = reciprocal_zeta_minus_one(self.alpha) - compensated_sum(self.coeff)
        return self._tail

    def __len__(self):
        return self.n.size


@cached(LRUCache(maxsize=app.config['SERIES_CACHE_SIZE']),
        key=lambda table, alpha, beta: hashkey(table.limit, alpha, beta), lock=Lock())
def dirichlet_series(table, alpha, beta):
    log.debug('Building series arrays for limit=%d alpha=%g beta=%g', table.limit, alpha, beta)
    return DirichletSeries(table, alpha, beta)


def tail_bound(params, limit):
    """
    Bound on the terms n > limit, using |mu| <= 1 and weights <= 1
    """
    if params.alpha <= 1.0:
        return float('inf')
    return limit ** (1.0 - params.alpha) / (params.alpha - 1.0)


def _validate_k(k):
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise ConfigurationException('k must be an integer, got %r' % (k,))
    if k < 0:
        raise ConfigurationException('k must be non-negative, got %d' % k)
    return int(k)


def _validate_table(table):
    if table.limit < 2:
        raise ConfigurationException('Sieve limit must be at least 2, got %d' % table.limit)


def tail_ratio(params, k, limit):
    """
    k limit^-beta, the largest 1 - (1 - n^-beta)^k beyond the sieve
    """
    return float(k) * float(limit) ** -params.beta


def tail_correction_applies(params, k, limit):
    return params.alpha > 1.0 and tail_ratio(params, k, limit) <= app.config['TAIL_CORRECTION_MAX_RATE']


def tail_correction(params, k, table):
    """
    The terms n > limit of the direct sum. Their weights (1 - n^-beta)^k differ from 1 by at
    most k n^-beta, so they are sum_(n > limit) mu(n) n^-alpha = 1/zeta(alpha) - sum_(n <= limit)
    to within k limit^(1 - alpha - beta) / (alpha + beta - 1).
    :return: (correction, bound on its error)
    """
    k = _validate_k(k)
    _validate_table(table)
    if params.alpha <= 1.0:
        raise DomainException('The tail correction needs zeta(alpha) finite, alpha=%g' % params.alpha)
    ratio = tail_ratio(params, k, table.limit)
    max_rate = app.config['TAIL_CORRECTION_MAX_RATE']
    if ratio > max_rate:
        raise ConfigurationException('The tail correction needs k limit^-beta <= %g, got %.3g for k=%d limit=%d'
                                     % (max_rate, ratio, k, table.limit))

    series = dirichlet_series(table, params.alpha, params.beta)
    exponent = params.alpha + params.beta
    bound = float(k) * float(table.limit) ** (1.0 - exponent) / (exponent - 1.0)
    return series.tail(), bound


def _sieve_sum(params, k, table, expression, windowed):
    series = dirichlet_series(table, params.alpha, params.beta)
    start = series.window_start(k) if windowed else 0
    coeff = series.coeff[start:]
    if k == 0:
        terms = coeff
    else:
        terms = numexpr.evaluate(expression, local_dict={'coeff': coeff,
                                                         'decay': series.decay[start:],
                                                         'rate': series.rate[start:],
                                                         'k': float(k)})
    return compensated_sum(terms), terms.size


def c_direct(params, k, table, windowed=True, tail_corrected=False):
    """
    c_k = sum mu(n) n^-alpha (1 - n^-beta)^k with the weight taken as exp(k log1p(-n^-beta))
    :param params: ModelParams
    :param k: k >= 0
    :param table: MobiusTable with limit >= 2
    :param windowed: skip the leading n whose weight underflows
    :param tail_corrected: add the terms beyond the sieve, see tail_correction
    :return: CoefficientResult
    """
    k = _validate_k(k)
    _validate_table(table)
    value, used = _sieve_sum(params, k, table, 'coeff * exp(k * decay)', windowed)
    # n = 1 has weight 0^k
    if k == 0:
        value += 1.0
        used += 1
    if tail_corrected:
        correction, bound = tail_correction(params, k, table)
        return CoefficientResult(value + correction, bound, used, DIRECT)
    return CoefficientResult(value, tail_bound(params, table.limit), used, DIRECT)


def exponential_sum(params, k, table, windowed=True):
    """
    sum mu(n) n^-alpha exp(-k n^-beta) for real k >= 0
    :return: (value, terms used)
    """
    value, used = _sieve_sum(params, k, table, 'coeff * exp(-k * rate)', windowed)
    return value + math.exp(-k), used + 1


def c_exponential(params, k, table, windowed=True):
    """
    c_k approximated by sum mu(n) n^-alpha exp(-k n^-beta), the large beta form of the direct sum
    """
    k = _validate_k(k)
    _validate_table(table)
    value, used = exponential_sum(params, k, table, windowed)
    return CoefficientResult(value, tail_bound(params, table.limit), used, EXPONENTIAL)


def c_binomial(params, k):
    """
    c_k = sum_j (-1)^j C(k, j) / zeta(alpha + beta j), written with 1/zeta - 1 so the
    constant parts cancel exactly. Loses all digits beyond BINOMIAL_MAX_K.
    """
    k = _validate_k(k)
    max_k = app.config['BINOMIAL_MAX_K']
    if k > max_k:
        raise ConfigurationException('The binomial method is limited to k <= %d by cancellation, '
                                     'use the direct method for k=%d' % (max_k, k))
    if params.alpha <= 1.0:
        raise DomainException('The binomial method needs zeta(alpha) finite, alpha=%g' % params.alpha)

    terms = []
    binom = 1
    for j in range(k + 1):
        sign = -1.0 if j % 2 else 1.0
        terms.append(sign * binom * reciprocal_zeta_minus_one(params.alpha + params.beta * j))
        binom = binom * (k - j) // (j + 1)
    value = math.fsum(terms) + (1.0 if k == 0 else 0.0)
    return CoefficientResult(value, 0.0, k + 1, BINOMIAL)


def normalize_method(method):
    method = METHOD_ALIASES.get(method, method)
    if method not in METHODS:
        raise ConfigurationException('Unknown method %r, expected one of %s' % (method, ', '.join(METHODS)))
    return method


def coefficient(params, k, table, method=DIRECT, tail_corrected=False):
    """
    Dispatch on the method name ('exp' is accepted for 'exponential')
    """
    method = normalize_method(method)
    if tail_corrected and method != DIRECT:
        raise ConfigurationException('The tail correction applies to the direct method only, got %s' % method)
    if method == DIRECT:
        return c_direct(params, k, table, tail_corrected=tail_corrected)
    if method == EXPONENTIAL:
        return c_exponential(params, k, table)
    return c_binomial(params, k)


def psi(params, k, c_k):
    """
    Critical function psi = c_k k^((alpha - rho) / beta), defined as 0 at k = 0
    """
    if k < 0:
        raise ConfigurationException('k must be non-negative, got %r' % (k,))
    if k == 0:
        return 0.0
    return c_k * float(k) ** params.psi_exponent


def poisson_mixture_check(params, k, table, mix=DIRECT):
    """
    Compare the exponential coefficient at k with the Poisson mixture sum_p c_p k^p / p! e^-k.
    The mixture runs over p <= k + 20 sqrt(k) + 50, beyond which the Poisson mass is below 1e-15.
    :param mix: DIRECT uses the direct sum for every c_p, BINOMIAL uses the binomial
                method where it is available (p <= BINOMIAL_MAX_K) and the direct sum beyond
    :return: |lhs - rhs|
    """
    k = _validate_k(k)
    max_k = app.config['POISSON_MAX_K']
    if k > max_k:
        raise ConfigurationException('The Poisson mixture check is limited to k <= %d, got %d' % (max_k, k))
    mix = normalize_method(mix)

    lhs = c_exponential(params, k, table).value
    p_max = int(math.ceil(k + 20.0 * math.sqrt(k) + 50.0))
    p = np.arange(p_max + 1)
    weights = stats.poisson.pmf(p, k) if k > 0 else (p == 0).astype(np.float64)

    use_binomial = mix == BINOMIAL and params.alpha > 1.0
    rhs = KahanSum()
    for order, weight in zip(p, weights):
        if weight == 0.0:
            continue
        if use_binomial and order <= app.config['BINOMIAL_MAX_K']:
            c_p = c_binomial(params, int(order)).value
        else:
            c_p = c_direct(params, int(order), table).value
        rhs += weight * c_p
    discrepancy = abs(lhs - rhs.get())
    log.debug('Poisson mixture k=%d p_max=%d discrepancy=%.3g', k, p_max, discrepancy)
    return discrepancy


def riesz_function(x, table=None):
    """
    F(x) = sum_k (-1)^(k+1) x^k / ((k-1)! zeta(2k)).
    Up to RIESZ_SERIES_MAX_X the power series is summed directly; beyond it F is evaluated
    as x sum mu(n) n^-2 exp(-x / n^2), which needs a mobius table.
    :param x: x >= 0
    :param table: MobiusTable, required for x > RIESZ_SERIES_MAX_X
    """
    x = float(x)
    if x < 0 or not math.isfinite(x):
        raise ConfigurationException('The Riesz function is evaluated for finite x >= 0, got %r' % x)
    if x == 0.0:
        return 0.0
    if x > RIESZ_SERIES_MAX_X:
        if table is None:
            raise ConfigurationException('F(%g) needs a mobius table above x=%g' % (x, RIESZ_SERIES_MAX_X))
        _validate_table(table)
        value, _ = exponential_sum(ModelParams(2.0, 2.0), x, table)
        return x * value

    partial = KahanSum()
    log_x = math.log(x)
    max_terms = int(5 * x) + 50
    for k in range(1, max_terms + 1):
        magnitude = math.exp(k * log_x - special.gammaln(k)) / (1.0 + float(special.zetac(2.0 * k)))
        partial += magnitude if k % 2 else -magnitude
        if k > x and magnitude < RIESZ_RELATIVE_STOP * abs(partial.get()):
            break
    return partial.get()
