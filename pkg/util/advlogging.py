import json
import os
import time
from collections import OrderedDict
from datetime import datetime
import logging

from engine import app
from util.common import NumpyEncoder, make_parent_dir, WriteErrorException

log = logging.getLogger(__name__)

REPORT_SUFFIX = '.report.json'


class RunReport(object):
    """
    JSON record of one CLI run: the configuration, the release, elapsed time and the results
    (features, bound monitor, verification checks). Written next to the output unless
    RUN_REPORT_DIR is configured.
    """

    def __init__(self, command, output_path=None, log_dir=None):
        log_dir = log_dir or app.config.get('RUN_REPORT_DIR')
        if output_path:
            stem = os.path.splitext(os.path.basename(output_path))[0]
            log_dir = log_dir or os.path.dirname(os.path.abspath(output_path))
        else:
            stem = command
            log_dir = log_dir or '.'
        self.m_path = os.path.join(log_dir, stem + REPORT_SUFFIX)
        self._start = time.time()
        self.m_data = OrderedDict()
        self.m_data['command'] = command
        self.m_data['version'] = app.config.get('RHWAVE_VERSION')
        self.m_data['started'] = datetime.now().isoformat()
        self.m_data['config'] = OrderedDict()
        self.m_data['results'] = OrderedDict()

    @property
    def path(self):
        return self.m_path

    def set_config(self, **kwargs):
        self.m_data['config'].update(kwargs)

    def add_result(self, key, value):
        self.m_data['results'][key] = value

    def write(self):
        self.m_data['elapsed_seconds'] = round(time.time() - self._start, 3)
        try:
            make_parent_dir(self.m_path)
            with open(self.m_path, 'w') as fh:
                log.info('Writing run report: %r', self.m_path)
                json.dump(self.m_data, fh, cls=NumpyEncoder, indent=2, separators=(',', ': '))
        except (EnvironmentError, WriteErrorException) as e:
            log.error('Failed to write run report: %s', e)
        return self.m_path
