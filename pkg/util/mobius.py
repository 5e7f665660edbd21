import logging
import math

import numpy as np

from engine import app
from util.common import ConfigurationException, log_timing

log = logging.getLogger(__name__)

# Largest block of n handled by one vectorised step of the mu recurrence
BLOCK_SIZE = 1 << 22


class MobiusTable(object):
    """
    Immutable table of mu(n) for 1 <= n <= limit, one signed byte per entry.
    Index 0 is unused and holds 0.
    """

    def __init__(self, limit, values):
        self.limit = limit
        values.setflags(write=False)
        self.values = values

    def mu(self, n):
        return mu(self, n)

    def partial_sum(self, n):
        """
        Mertens partial sum M(n), used only as a sanity oracle
        """
        if n < 1 or n > self.limit:
            raise ConfigurationException('n=%d outside the table range 1..%d' % (n, self.limit))
        return int(self.values[1:n + 1].sum(dtype=np.int64))

    def support(self):
        """
        :return: the n with mu(n) != 0 in increasing order
        """
        return np.flatnonzero(self.values)

    def __len__(self):
        return self.limit

    def __repr__(self):
        return 'MobiusTable(limit=%d)' % self.limit


def _smallest_prime_factors(limit):
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            multiples = spf[p * p::p]
            multiples[multiples == 0] = p
    primes = np.flatnonzero(spf == 0)
    primes = primes[primes >= 2]
    spf[primes] = primes
    return spf


@log_timing(log)
def build_sieve(limit):
    """
    Build the mobius table up to limit with the linear recurrence over smallest prime factors:
    mu(n) = 0 if p^2 | n, else -mu(n / p), where p is the smallest prime factor of n.
    Every n in [lo, 2 lo) only refers to values below lo, so each doubling block is one vector step.
    :param limit: largest n in the table
    :return: MobiusTable
    """
    ceiling = app.config['SIEVE_CEILING']
    if limit < 1 or limit > ceiling:
        raise ConfigurationException(
            'Sieve limit %r must be between 1 and %d entries (the build needs 5 bytes per entry, '
            'about %.1f GB at the ceiling; the finished table keeps 1 byte per entry and every cached '
            '(alpha, beta) series about 20 more, up to SERIES_CACHE_SIZE=%d of them)' %
            (limit, ceiling, 5.0 * ceiling / 1e9, app.config['SERIES_CACHE_SIZE']))

    log.info('Building mobius sieve up to %d', limit)
    spf = _smallest_prime_factors(limit)
    values = np.zeros(limit + 1, dtype=np.int8)
    values[1] = 1

    lo = 2
    while lo <= limit:
        hi = min(2 * lo, limit + 1)
        for start in range(lo, hi, BLOCK_SIZE):
            stop = min(start + BLOCK_SIZE, hi)
            n = np.arange(start, stop, dtype=np.int64)
            p = spf[start:stop].astype(np.int64)
            q = n // p
            values[start:stop] = np.where(q % p == 0, 0, -values[q])
        lo = hi

    return MobiusTable(limit, values)


def mu(table, n):
    """
    :param table: MobiusTable
    :param n: 1 <= n <= table.limit
    :return: mu(n) in {-1, 0, 1}
    """
    if n < 1 or n > table.limit:
        raise ConfigurationException('mu(%r) is outside the valid range 1..%d' % (n, table.limit))
    return int(table.values[n])
