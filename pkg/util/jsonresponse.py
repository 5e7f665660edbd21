import json
import logging
from collections import OrderedDict

import numpy as np

from util.common import NumpyEncoder, finite_or_none, make_parent_dir, WriteErrorException, log_timing

log = logging.getLogger(__name__)


class JsonResponse(object):
    """
    JSON rendering of a scan or sweep dataset: the dataset attributes plus one record per row.
    Non finite numbers are written as null.
    """

    def __init__(self, dataset, extra=None):
        self.dataset = dataset
        self.extra = extra

    def records(self):
        frame = self.dataset.to_dataframe().reset_index()
        rows = []
        for row in frame.to_dict(orient='records'):
            rows.append(OrderedDict((key, self._clean(value)) for key, value in row.items()))
        return rows

    @staticmethod
    def _clean(value):
        if isinstance(value, (int, np.integer)):
            return int(value)
        return finite_or_none(value)

    def to_dict(self):
        out = OrderedDict()
        out['attrs'] = OrderedDict((key, self.dataset.attrs[key]) for key in sorted(self.dataset.attrs))
        if self.extra:
            out.update(self.extra)
        out['data'] = self.records()
        return out

    @log_timing(log)
    def json(self):
        return json.dumps(self.to_dict(), indent=2, cls=NumpyEncoder)

    @log_timing(log)
    def write_json(self, path):
        make_parent_dir(path)
        try:
            with open(path, 'w') as fh:
                fh.write(self.json())
        except EnvironmentError as e:
            raise WriteErrorException('Unable to write %s: %s' % (path, e))
        return path
