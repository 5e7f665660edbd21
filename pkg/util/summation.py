import math

import numpy as np

# Values handed to math.fsum per call, bounds the size of the temporary Python list
FSUM_CHUNK = 1 << 18


class KahanSum(object):
    """
    Running sum with second order Neumaier compensation, for series summed term by term
    where the stopping rule needs the partial sum.

    >>> acc = KahanSum()
    >>> for term in (1.0, 1e100, 1.0, -1e100):
    ...     acc += term
    >>> acc.get()
    2.0
    """

    def __init__(self, value=0.0):
        self.s = float(value)
        self.cs = 0.0
        self.ccs = 0.0

    def get(self):
        return self.s + self.cs + self.ccs

    def __iadd__(self, x):
        s, cs = self.s, self.cs
        t = s + x
        if abs(s) >= abs(x):
            c = (s - t) + x
        else:
            c = (x - t) + s
        s = t
        t = cs + c
        if abs(cs) >= abs(c):
            cc = (cs - t) + c
        else:
            cc = (c - t) + cs
        self.s, self.cs = s, t
        self.ccs += cc
        return self

    def add_array(self, values):
        """
        Add the compensated sum of an array of terms
        """
        self += compensated_sum(values)
        return self

    def __float__(self):
        return self.get()

    def __repr__(self):
        return 'KahanSum(%r)' % self.get()


def compensated_sum(values):
    """
    Compensated sum of a real array via math.fsum, exactly rounded within each chunk
    :param values: iterable or numpy array of floats
    :return: float
    """
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size <= FSUM_CHUNK:
        return math.fsum(values.tolist())
    partials = [math.fsum(values[i:i + FSUM_CHUNK].tolist()) for i in range(0, values.size, FSUM_CHUNK)]
    return math.fsum(partials)


def compensated_complex_sum(values):
    values = np.asarray(values, dtype=np.complex128)
    return complex(compensated_sum(values.real), compensated_sum(values.imag))
