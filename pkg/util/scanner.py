"""
Wave scans over k grids and beta sweeps, and the oscillation features measured on them.
"""
import logging
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import xarray as xr
from scipy.signal import argrelextrema

from engine import app
from util.coefficients import ModelParams, coefficient, normalize_method, psi, tail_ratio, BINOMIAL, DIRECT
from util.common import ConfigurationException, log_timing
from util.csvresponse import CsvGenerator, read_fingerprint, read_rows, write_fingerprint
from util.wave import AsymptoticWave, first_zero_amplitude

log = logging.getLogger(__name__)

WaveSample = namedtuple('WaveSample', ['k', 'x', 'c_k', 'psi', 'psi_bar', 'tail_bound'])
OscillationFeatures = namedtuple('OscillationFeatures', ['zero_crossings', 'extrema', 'measured_period_x',
                                                         'measured_amplitude', 'crossing_count',
                                                         'period_amplitudes', 'onset_x'])
SweepResult = namedtuple('SweepResult', ['dataset', 'samples', 'features', 'onsets'])

DATA_VARIABLES = ('x', 'c_k', 'psi', 'psi_bar', 'tail_bound')


class ScanConfig(object):
    """
    Grid, sieve, method and zero count of one scan. The grid is log spaced with points
    entries (rounded to integers, duplicates removed) unless a stride is given.
    tail_corrected adds the terms beyond the sieve to the direct sum, trivial_zeros adds
    the fading trivial zero terms to psi_bar.
    """

    def __init__(self, params, k_min=1, k_max=10 ** 6, points=None, stride=None, sieve_limit=None,
                 method=DIRECT, zeros_used=None, output_path=None, output_format='csv', workers=None,
                 resume=False, tail_corrected=False, trivial_zeros=0):
        self.params = params
        self.k_min = self._integer('k_min', k_min)
        self.k_max = self._integer('k_max', k_max)
        self.points = None if points is None else self._integer('points', points)
        self.stride = None if stride is None else self._integer('stride', stride)
        self.sieve_limit = self._integer('sieve_limit', sieve_limit or app.config['SIEVE_LIMIT'])
        self.method = normalize_method(method)
        self.zeros_used = self._integer('zeros_used', zeros_used or app.config['DEFAULT_ZEROS'])
        self.output_path = output_path
        self.output_format = output_format
        self.workers = self._integer('workers', workers or app.config['SCAN_WORKERS'])
        self.resume = resume
        self.tail_corrected = bool(tail_corrected)
        self.trivial_zeros = self._integer('trivial_zeros', trivial_zeros)
        self._validate()

    @staticmethod
    def _integer(name, value):
        if isinstance(value, bool):
            raise ConfigurationException('%s must be an integer, got %r' % (name, value))
        try:
            as_int = int(value)
        except (TypeError, ValueError):
            raise ConfigurationException('%s must be an integer, got %r' % (name, value))
        if as_int != value:
            raise ConfigurationException('%s must be an integer, got %r' % (name, value))
        return as_int

    def _validate(self):
        if self.k_min < 1:
            raise ConfigurationException('k_min must be at least 1, got %d' % self.k_min)
        if self.k_max < self.k_min:
            raise ConfigurationException('k_max %d is below k_min %d' % (self.k_max, self.k_min))
        if self.k_max > app.config['MAX_SCAN_K']:
            raise ConfigurationException('k_max %d exceeds %d' % (self.k_max, app.config['MAX_SCAN_K']))
        if self.points is not None and self.stride is not None:
            raise ConfigurationException('Give either points or stride, not both')
        if self.stride is None:
            self.points = self.points if self.points is not None else app.config['SCAN_POINTS']
            if self.points < 2:
                raise ConfigurationException('A log grid needs at least 2 points, got %d' % self.points)
        elif self.stride < 1:
            raise ConfigurationException('stride must be at least 1, got %d' % self.stride)
        if self.method == BINOMIAL and self.k_max > app.config['BINOMIAL_MAX_K']:
            raise ConfigurationException('The binomial method is limited to k <= %d'
                                         % app.config['BINOMIAL_MAX_K'])
        if not 1 <= self.zeros_used <= app.config['MAX_ZEROS']:
            raise ConfigurationException('zeros_used must be between 1 and %d' % app.config['MAX_ZEROS'])
        if self.output_format not in app.config['OUTPUT_FORMATS']:
            raise ConfigurationException('Unknown output format %r' % (self.output_format,))
        if self.workers < 1:
            raise ConfigurationException('workers must be at least 1')
        if self.resume and not self.output_path:
            raise ConfigurationException('resume needs an output path to read the checkpoint from')
        if self.trivial_zeros < 0:
            raise ConfigurationException('trivial_zeros must be non-negative, got %d' % self.trivial_zeros)
        if self.tail_corrected:
            if self.method != DIRECT:
                raise ConfigurationException('The tail correction applies to the direct method only')
            if self.params.alpha <= 1.0:
                raise ConfigurationException('The tail correction needs alpha > 1, got %g' % self.params.alpha)
            ratio = tail_ratio(self.params, self.k_max, self.sieve_limit)
            if ratio > app.config['TAIL_CORRECTION_MAX_RATE']:
                raise ConfigurationException('The tail correction needs k_max sieve_limit^-beta <= %g, got %.3g'
                                             % (app.config['TAIL_CORRECTION_MAX_RATE'], ratio))

    def grid(self):
        """
        :return: sorted unique int64 array of k values
        """
        if self.stride is not None:
            return np.arange(self.k_min, self.k_max + 1, self.stride, dtype=np.int64)
        points = np.logspace(math.log10(self.k_min), math.log10(self.k_max), self.points)
        grid = np.unique(np.rint(points).astype(np.int64))
        return grid[(grid >= self.k_min) & (grid <= self.k_max)]

    def as_dict(self):
        return dict(self.params.as_dict(), k_min=self.k_min, k_max=self.k_max, points=self.points,
                    stride=self.stride, sieve_limit=self.sieve_limit, method=self.method,
                    zeros_used=self.zeros_used, output_path=self.output_path,
                    output_format=self.output_format, workers=self.workers, resume=self.resume,
                    tail_corrected=self.tail_corrected, trivial_zeros=self.trivial_zeros)

    def fingerprint(self):
        """
        Settings that change the rows of a scan, stored with its checkpoint
        """
        return dict(self.params.as_dict(), sieve_limit=self.sieve_limit, method=self.method,
                    zeros_used=self.zeros_used, trivial_zeros=self.trivial_zeros,
                    tail_corrected=self.tail_corrected)


def compute_sample(params, k, table, wave, method=DIRECT, tail_corrected=False):
    """
    One scan row. psi_bar is nan for k < 2 where the wave is not defined.
    """
    k = int(k)
    result = coefficient(params, k, table, method, tail_corrected)
    psi_bar = float(wave(k)) if wave is not None and k >= 2 else float('nan')
    return WaveSample(k, math.log(k), result.value, psi(params, k, result.value), psi_bar, result.tail_bound)


def to_dataset(samples, config=None):
    """
    :param samples: sequence of WaveSample
    :param config: ScanConfig whose settings go into the attributes
    :return: xarray Dataset over the k dimension
    """
    k = np.array([sample.k for sample in samples], dtype=np.int64)
    data_vars = {}
    for name in DATA_VARIABLES:
        data_vars[name] = ('k', np.array([getattr(sample, name) for sample in samples], dtype=np.float64))
    dataset = xr.Dataset(data_vars, coords={'k': k})
    if config is not None:
        attrs = config.fingerprint()
        attrs['tail_corrected'] = int(config.tail_corrected)
        dataset.attrs.update(attrs)
    dataset.attrs['version'] = app.config['RHWAVE_VERSION']
    return dataset


def samples_from_frame(frame):
    return [WaveSample(int(row.k), float(row.x), float(row.c_k), float(row.psi), float(row.psi_bar),
                       float(row.tail_bound)) for row in frame.itertuples(index=False)]


def _load_checkpoint(config, grid):
    frame = read_rows(config.output_path)
    if frame.empty:
        return []
    stored = read_fingerprint(config.output_path)
    if stored is None:
        raise ConfigurationException('Checkpoint %s has no record of the settings it was computed with'
                                     % config.output_path)
    expected = config.fingerprint()
    changed = sorted(key for key in set(stored) | set(expected) if stored.get(key) != expected.get(key))
    if changed:
        raise ConfigurationException('Checkpoint %s was computed with different settings: %s' % (
            config.output_path, ', '.join('%s %r != %r' % (key, stored.get(key), expected.get(key))
                                          for key in changed)))
    frame = frame[frame['k'].isin(grid)].drop_duplicates('k')
    log.info('Resuming scan from %s with %d of %d rows done', config.output_path, len(frame), grid.size)
    return samples_from_frame(frame)


@log_timing(log)
def run_scan(config, table, zeros, checkpoint=False):
    """
    Compute one WaveSample per grid point on a thread pool sharing the table and zeros.
    :param config: ScanConfig
    :param table: MobiusTable with limit == config.sieve_limit
    :param zeros: ZeroTable with at least config.zeros_used zeros
    :param checkpoint: append every SCAN_CHUNK rows to config.output_path (csv) and rewrite it sorted at the end
    :return: list of WaveSample sorted by k
    """
    if table.limit != config.sieve_limit:
        raise ConfigurationException('Table limit %d does not match the configured sieve limit %d'
                                     % (table.limit, config.sieve_limit))
    if zeros.count < config.zeros_used:
        raise ConfigurationException('Scan needs %d zeros, table has %d' % (config.zeros_used, zeros.count))
    if checkpoint and not config.output_path:
        raise ConfigurationException('Checkpointing needs an output path')

    params = config.params
    wave = AsymptoticWave(params, zeros.head(config.zeros_used), config.trivial_zeros)
    grid = config.grid()

    samples = _load_checkpoint(config, grid) if config.resume else []
    done = set(sample.k for sample in samples)
    todo = [int(k) for k in grid if int(k) not in done]
    chunk = app.config['SCAN_CHUNK']
    append = bool(samples)

    def compute(k):
        return compute_sample(params, k, table, wave, config.method, config.tail_corrected)

    if checkpoint:
        write_fingerprint(config.output_path, config.fingerprint())
    log.info('Scanning %d points in [%d, %d] for alpha=%g beta=%g rho=%g with %d workers',
             len(todo), config.k_min, config.k_max, params.alpha, params.beta, params.rho, config.workers)
    with ThreadPoolExecutor(max_workers=config.workers) as executor:
        for start in range(0, len(todo), chunk):
            batch = list(executor.map(compute, todo[start:start + chunk]))
            samples.extend(batch)
            if checkpoint:
                CsvGenerator(to_dataset(batch, config)).write(config.output_path, append=append)
                append = True
            log.debug('Scan progress %d/%d', len(samples), grid.size)

    samples.sort(key=lambda sample: sample.k)
    if checkpoint:
        CsvGenerator(to_dataset(samples, config)).write(config.output_path)
    return samples


def _columns(samples):
    if hasattr(samples, 'data_vars'):
        return np.asarray(samples['x'].values, dtype=np.float64), np.asarray(samples['psi'].values, dtype=np.float64)
    x = np.array([sample.x for sample in samples], dtype=np.float64)
    values = np.array([sample.psi for sample in samples], dtype=np.float64)
    return x, values


def find_crossings(x, y):
    """
    Linearly interpolated zero crossings
    :return: (rising x positions, falling x positions)
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    left, right = y[:-1], y[1:]
    rise = np.flatnonzero((left < 0) & (right >= 0))
    fall = np.flatnonzero((left >= 0) & (right < 0))

    def interpolate(index):
        return x[index] - y[index] * (x[index + 1] - x[index]) / (y[index + 1] - y[index])

    return interpolate(rise), interpolate(fall)


def first_crossing_x(samples):
    """
    x of the first sign change, inf when the scan never changes sign
    """
    x, values = _columns(samples)
    rises, falls = find_crossings(x, values)
    crossings = np.concatenate((rises, falls))
    return float(crossings.min()) if crossings.size else float('inf')


def extract_features(samples, onset_x=None, period_hint=None):
    """
    Crossings, extrema, period and amplitude of psi beyond the onset.
    :param samples: sequence of WaveSample or a scan dataset
    :param onset_x: start of the measured region, default the x of the global minimum plus period_hint
    :param period_hint: predicted period in x used for the default onset
    :return: OscillationFeatures, with None period when fewer than 3 crossings lie beyond the onset
    """
    x, values = _columns(samples)
    order = np.argsort(x)
    x, values = x[order], values[order]
    finite = np.isfinite(values)
    x, values = x[finite], values[finite]
    if x.size == 0:
        return OscillationFeatures([], [], None, None, 0, [], onset_x)

    if onset_x is None:
        onset_x = float(x[np.argmin(values)]) + (period_hint or 0.0)

    rises, falls = find_crossings(x, values)
    rises, falls = rises[rises > onset_x], falls[falls > onset_x]
    crossings = np.sort(np.concatenate((rises, falls)))

    maxima = argrelextrema(values, np.greater)[0]
    minima = argrelextrema(values, np.less)[0]
    extrema_index = np.sort(np.concatenate((maxima, minima)))
    extrema_index = extrema_index[x[extrema_index] > onset_x]
    extrema = [(float(x[i]), float(values[i])) for i in extrema_index]

    period = None
    if crossings.size >= 3:
        gaps = np.concatenate((np.diff(rises), np.diff(falls)))
        if gaps.size:
            period = float(gaps.mean())

    amplitude = float(np.abs(values[extrema_index]).mean()) if extrema_index.size else None

    period_amplitudes = []
    for lo, hi in zip(rises[:-1], rises[1:]):
        inside = (x >= lo) & (x < hi)
        if np.any(inside):
            period_amplitudes.append(float(np.abs(values[inside]).max()))

    return OscillationFeatures([float(c) for c in crossings], extrema, period, amplitude,
                               int(crossings.size), period_amplitudes, float(onset_x))


def predicted_period(params, zeros):
    return first_zero_amplitude(params, zeros).period_x


@log_timing(log)
def beta_sweep(alpha, betas, k_max, table, zeros, k_min=1, points=None, stride=None, rho=0.5,
               method=DIRECT, zeros_used=None, workers=None):
    """
    One scan per beta on a shared grid.
    :return: SweepResult with the combined dataset over (beta, k), per beta samples and features,
             and the onset (first crossing, inf when absent) per beta
    """
    betas = [float(beta) for beta in betas]
    if not betas:
        raise ConfigurationException('A sweep needs at least one beta')
    if any(beta <= 0 for beta in betas):
        raise ConfigurationException('Every beta must be positive, got %s' % betas)

    datasets, samples_by_beta, features, onsets = [], {}, {}, {}
    for beta in betas:
        params = ModelParams(alpha, beta, rho)
        config = ScanConfig(params, k_min=k_min, k_max=k_max, points=points, stride=stride,
                            sieve_limit=table.limit, method=method, zeros_used=zeros_used, workers=workers)
        samples = run_scan(config, table, zeros)
        dataset = to_dataset(samples, config)
        dataset.attrs.pop('beta', None)
        datasets.append(dataset.expand_dims(beta=[beta]))
        samples_by_beta[beta] = samples
        features[beta] = extract_features(samples, period_hint=predicted_period(params, zeros))
        onsets[beta] = first_crossing_x(samples)
        log.info('beta=%g onset x=%s crossings=%d', beta, onsets[beta], features[beta].crossing_count)

    combined = xr.concat(datasets, dim='beta')
    return SweepResult(combined, samples_by_beta, features, onsets)
