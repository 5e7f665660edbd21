import os

from concurrent_log_handler import ConcurrentRotatingFileHandler


class DynamicConcurrentRotatingFileHandler(ConcurrentRotatingFileHandler):
    """
    Rotating file handler safe for the scan worker pool and gunicorn workers writing the same log.
    The log directory comes from RHWAVE_LOG_LOC, defaulting to the current directory.
    """
    def __init__(self, file_name, mode, max_bytes, backup_count):
        path = os.getenv('RHWAVE_LOG_LOC', '.')
        super(DynamicConcurrentRotatingFileHandler, self).__init__(
                os.path.join(path, file_name), mode, max_bytes, backup_count)
