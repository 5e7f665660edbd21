import io
import json
import logging
import os

import pandas as pd

from engine import app
from util.common import NumpyEncoder, make_parent_dir, WriteErrorException, log_timing

log = logging.getLogger(__name__)


class CsvGenerator(object):
    """
    Class to generate csv output for a scan or sweep dataset.
    Columns follow SCAN_COLUMNS, sweeps get a leading beta column.
    """

    def __init__(self, dataset, float_format=None):
        self.dataset = dataset
        self.float_format = float_format or app.config['CSV_FLOAT_FORMAT']

    @property
    def columns(self):
        columns = list(app.config['SCAN_COLUMNS'])
        if 'beta' in self.dataset.dims:
            columns.insert(0, 'beta')
        return columns

    def to_dataframe(self):
        frame = self.dataset.to_dataframe().reset_index()
        return frame[self.columns]

    def to_csv(self):
        buf = io.StringIO()
        self._write_frame(self.to_dataframe(), buf, header=True)
        return buf.getvalue()

    @log_timing(log)
    def write(self, path, append=False):
        """
        Write (or append to) a csv file
        :param path: output file
        :param append: append rows without a header if the file already exists
        :return: path written
        """
        make_parent_dir(path)
        header = not (append and os.path.exists(path) and os.path.getsize(path) > 0)
        try:
            with open(path, 'a' if append else 'w') as filehandle:
                self._write_frame(self.to_dataframe(), filehandle, header=header)
        except EnvironmentError as e:
            raise WriteErrorException('Unable to write %s: %s' % (path, e))
        return path

    def _write_frame(self, frame, filehandle, header):
        frame.to_csv(path_or_buf=filehandle, index=False, header=header,
                     float_format=self.float_format, na_rep='nan')


def read_rows(path):
    """
    Read back rows written by CsvGenerator, empty frame if the file is missing or empty
    """
    if not os.path.exists(path) or os.path.getsize(path) == 0:
        return pd.DataFrame(columns=app.config['SCAN_COLUMNS'])
    try:
        return pd.read_csv(path, dtype={'k': 'int64'})
    except (EnvironmentError, ValueError) as e:
        raise WriteErrorException('Unable to read checkpoint %s: %s' % (path, e))


def fingerprint_path(path):
    return path + '.config.json'


def write_fingerprint(path, fingerprint):
    """
    Store the settings a checkpoint was computed with next to it
    """
    sidecar = fingerprint_path(path)
    make_parent_dir(sidecar)
    try:
        with open(sidecar, 'w') as fh:
            json.dump(fingerprint, fh, indent=2, sort_keys=True, cls=NumpyEncoder)
    except EnvironmentError as e:
        raise WriteErrorException('Unable to write %s: %s' % (sidecar, e))
    return sidecar


def read_fingerprint(path):
    """
    :return: the settings stored by write_fingerprint, None if there is no record
    """
    sidecar = fingerprint_path(path)
    if not os.path.exists(sidecar):
        return None
    try:
        with open(sidecar) as fh:
            return json.load(fh)
    except (EnvironmentError, ValueError) as e:
        raise WriteErrorException('Unable to read %s: %s' % (sidecar, e))
