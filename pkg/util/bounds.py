"""
Crude bound on the critical function of a sieve truncated at N, its threshold solver and the
monitor of the conjectured absolute bound |1/zeta(1/2) - 1|.

With |mu| <= 1 and (1 - n^-beta)^k <= (1 - N^-beta)^k for 2 <= n <= N,
    |psi_N(k)| <= (zeta(alpha) - 1) exp(a x + e^x ln(1 - N^-beta)),   x = ln k, a = (alpha - rho)/beta
and for large N ln(1 - N^-beta) is replaced by -N^-beta.
"""
import logging
import math
from collections import namedtuple

import numpy as np
import pandas as pd
from scipy import special

from engine import app
from util.coefficients import c_direct
from util.common import ConfigurationException, DomainException

log = logging.getLogger(__name__)

BoundQuery = namedtuple('BoundQuery', ['params', 'sieve_cap', 'target_amplitude'])
BoundReport = namedtuple('BoundReport', ['max_abs_psi', 'k_at_max', 'bound', 'margin', 'exceeded', 'samples'])
CutoffStability = namedtuple('CutoffStability', ['k', 'small_limit', 'large_limit',
                                                 'small_value', 'large_value', 'difference'])


def _validate(params, cap):
    if params.alpha <= 1.0:
        raise DomainException('The crude bound needs zeta(alpha) finite, alpha=%g' % params.alpha)
    if cap < 2:
        raise ConfigurationException('Sieve cap must be at least 2, got %r' % (cap,))


def _log_suppression(params, cap, x, exact):
    """
    log of the factor e^x |ln(1 - N^-beta)| (or e^x N^-beta) in log space
    """
    log_rate = -params.beta * math.log(cap)
    # below e^-700 the two forms are identical in binary64
    if exact and log_rate > -700.0:
        log_rate = math.log(-math.log1p(-math.exp(log_rate)))
    return x + log_rate


def crude_bound(params, cap, x, exact=False):
    """
    :param params: ModelParams with alpha > 1
    :param cap: sieve cutoff N >= 2
    :param x: ln k, scalar or array
    :param exact: use ln(1 - N^-beta) instead of -N^-beta
    :return: bound on |psi| for the sieve truncated at N
    """
    _validate(params, cap)
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(over='ignore'):
        exponent = params.psi_exponent * x - np.exp(_log_suppression(params, cap, x, exact))
        value = float(special.zetac(params.alpha)) * np.exp(exponent)
    return float(value) if value.ndim == 0 else value


def peak_x(params, cap):
    """
    x* = ln(a N^beta), where the exponent of the simplified bound is largest
    """
    _validate(params, cap)
    return math.log(params.psi_exponent) + params.beta * math.log(cap)


def threshold_x(query, exact=False):
    """
    Smallest x on a THRESHOLD_RESOLUTION grid right of the peak beyond which the bound stays below the target
    :param query: BoundQuery
    :return: threshold x, 0.0 when the bound never reaches the target
    """
    params, cap, target = query
    _validate(params, cap)
    if not target > 0:
        raise ConfigurationException('Target amplitude must be positive, got %r' % (target,))
    resolution = app.config['THRESHOLD_RESOLUTION']

    lo = peak_x(params, cap)
    if crude_bound(params, cap, lo, exact) < target:
        log.info('Bound for alpha=%g beta=%g N=%d stays below %g everywhere', params.alpha, params.beta, cap, target)
        return 0.0

    step = 1.0
    hi = lo + step
    while crude_bound(params, cap, hi, exact) >= target:
        lo, step = hi, 2.0 * step
        hi = lo + step

    while hi - lo > 1e-3 * resolution:
        mid = 0.5 * (lo + hi)
        if crude_bound(params, cap, mid, exact) >= target:
            lo = mid
        else:
            hi = mid
    return round(math.ceil(hi / resolution - 1e-9) * resolution, 10)


def bound_curve(params, cap, x_min, x_max, step=None):
    """
    Both forms of the bound on an x grid
    :return: DataFrame with columns x, bound, bound_exact
    """
    step = step or app.config['THRESHOLD_RESOLUTION']
    if x_max < x_min or step <= 0:
        raise ConfigurationException('Invalid curve grid [%r, %r] step %r' % (x_min, x_max, step))
    x = np.arange(x_min, x_max + 0.5 * step, step)
    return pd.DataFrame({'x': x,
                         'bound': crude_bound(params, cap, x),
                         'bound_exact': crude_bound(params, cap, x, exact=True)},
                        columns=['x', 'bound', 'bound_exact'])


def absolute_bound_monitor(samples):
    """
    Report max |psi| against the conjectured absolute bound. Never raises on an exceedance,
    it is logged at ERROR.
    :param samples: non empty sequence of WaveSample, or a dataset with k and psi
    :return: BoundReport
    """
    if hasattr(samples, 'data_vars'):
        k = np.asarray(samples['k'].values).ravel()
        psi = np.asarray(samples['psi'].values).ravel()
        if psi.size != k.size:
            k = np.broadcast_to(samples['k'].values, samples['psi'].shape).ravel()
    else:
        samples = list(samples)
        k = np.array([sample.k for sample in samples])
        psi = np.array([sample.psi for sample in samples], dtype=np.float64)
    if psi.size == 0:
        raise ConfigurationException('The bound monitor needs at least one sample')

    bound = app.config['ABSOLUTE_BOUND']
    magnitude = np.abs(psi)
    index = int(np.nanargmax(magnitude)) if np.any(np.isfinite(magnitude)) else 0
    max_abs = float(magnitude[index])
    report = BoundReport(max_abs, int(k[index]), bound, bound - max_abs, max_abs > bound, int(psi.size))
    if report.exceeded:
        log.error('|psi| = %.6g at k=%d exceeds the conjectured absolute bound %.5f by %.3g',
                  max_abs, report.k_at_max, bound, -report.margin)
    else:
        log.info('max |psi| = %.6g at k=%d, margin %.6g to %.5f', max_abs, report.k_at_max, report.margin, bound)
    return report


def cutoff_stability(params, k, small_table, large_table):
    """
    Absolute change of c_k when the sieve cutoff grows from small_table.limit to large_table.limit
    """
    small = c_direct(params, k, small_table).value
    large = c_direct(params, k, large_table).value
    return CutoffStability(k, small_table.limit, large_table.limit, small, large, abs(large - small))
