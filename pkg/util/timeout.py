import signal
import logging

from engine import app
from functools import wraps
from util.common import RHWaveException, TimedOutException


log = logging.getLogger(__name__)


def sigalarm_handler(signum, frame):
    raise TimedOutException()


def set_timeout(timeout=None):
    # SIGALRM based, main thread only
    if timeout is None or not isinstance(timeout, int):
        timeout = app.config['REQUEST_TIMEOUT_SECONDS']

    def inner(func):
        @wraps(func)
        def decorated_function(*args, **kwargs):
            signal.signal(signal.SIGALRM, sigalarm_handler)
            signal.alarm(timeout)
            try:
                result = func(*args, **kwargs)
            except TimedOutException:
                log.error('%s timed out after %d seconds', func.__name__, timeout)
                raise RHWaveException('Computation timed out after %s seconds' % timeout, status_code=408)
            finally:
                signal.alarm(0)

            return result

        return decorated_function
    return inner
