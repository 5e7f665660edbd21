import json
import logging
import math
import os
import time
from functools import wraps

import numpy as np

log = logging.getLogger(__name__)


class NumpyEncoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.integer):
            return int(obj)
        if isinstance(obj, np.floating):
            return float(obj)
        if isinstance(obj, complex):
            return [obj.real, obj.imag]
        return json.JSONEncoder.default(self, obj)


def log_timing(logger):
    """
    Log entry, exit and elapsed time of the decorated function at DEBUG level.
    The level is checked per call so the decorator can be applied before logging is configured.
    :param logger: logger of the decorated function's module
    """
    def _log_timing(func):
        @wraps(func)
        def inner(*args, **kwargs):
            if not logger.isEnabledFor(logging.DEBUG):
                return func(*args, **kwargs)
            logger.debug('Entered method: %s', func.__name__)
            start = time.time()
            results = func(*args, **kwargs)
            elapsed = time.time() - start
            logger.debug('Completed method: %s in %.2f', func.__name__, elapsed)
            return results

        return inner

    return _log_timing


def finite_or_none(value):
    """
    JSON has no representation for inf/nan, report them as None
    """
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def parse_float_list(text):
    """
    Parse a comma separated list of numbers such as '4,8,12,20'
    :param text: the list as given on the command line
    :return: list of floats
    """
    try:
        values = [float(item) for item in text.split(',') if item.strip()]
    except (AttributeError, ValueError):
        raise ConfigurationException('Expected a comma separated list of numbers, got %r' % (text,))
    if not values:
        raise ConfigurationException('Expected at least one number, got %r' % (text,))
    return values


class RHWaveException(Exception):
    status_code = 500
    exit_code = 1

    def __init__(self, message, status_code=None, payload=None):
        Exception.__init__(self, message)
        self.message = message
        if status_code is not None:
            self.status_code = status_code
        self.payload = payload

    def to_dict(self):
        rv = dict(self.payload or ())
        rv['message'] = self.message
        return rv


class ConfigurationException(RHWaveException):
    """
    Invalid model parameters, grid, sieve size or out of range index
    """
    status_code = 400
    exit_code = 2


class DomainException(RHWaveException):
    """
    Argument outside the domain supported by a special function
    """
    status_code = 400
    exit_code = 2


class PoleException(DomainException):
    """
    Argument too close to a pole. The offending pole is carried in payload and in .pole
    """
    def __init__(self, message, pole, payload=None):
        payload = dict(payload or ())
        payload['pole'] = pole
        super(PoleException, self).__init__(message, payload=payload)
        self.pole = pole


class ZeroRefinementException(RHWaveException):
    """
    A zeta zero seed could not be refined to the required tolerance
    """
    status_code = 500
    exit_code = 1

    def __init__(self, message, seed_index):
        super(ZeroRefinementException, self).__init__(message, payload={'seed_index': seed_index})
        self.seed_index = seed_index


class VerificationException(RHWaveException):
    """
    One or more verification checks failed
    """
    status_code = 500
    exit_code = 1


class WriteErrorException(RHWaveException):
    """
    Error writing one or more files
    """
    status_code = 500
    exit_code = 3


class MalformedRequestException(RHWaveException):
    """
    Structural problem in an HTTP request such as missing mandatory data
    """
    status_code = 400
    exit_code = 2


class TimedOutException(Exception):
    pass


def make_parent_dir(path):
    """
    Create the directory holding path if it does not exist yet
    """
    parent_dir = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(parent_dir):
        try:
            os.makedirs(parent_dir)
        except OSError:
            if not os.path.isdir(parent_dir):
                raise WriteErrorException('Unable to create local output directory: %s' % parent_dir)
    return parent_dir
