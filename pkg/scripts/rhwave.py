"""
Command line interface of the RH wave laboratory.

Results go to stdout as CSV (or to --out for scans and sweeps), log records to stderr and rhwave.log.
Exit codes: 0 success, 1 failed verification or computation, 2 bad configuration, 3 I/O error.
"""
import argparse
import logging
import math
import sys

import pandas as pd

from engine import app
from util.advlogging import RunReport
from util.bounds import BoundQuery, absolute_bound_monitor, bound_curve, peak_x, threshold_x
from util.coefficients import (ModelParams, RIESZ_SERIES_MAX_X, coefficient, normalize_method,
                               riesz_function, BINOMIAL, DIRECT)
from util.common import ConfigurationException, RHWaveException, VerificationException, parse_float_list
from util.csvresponse import CsvGenerator
from util.jsonresponse import JsonResponse
from util.mobius import build_sieve
from util.scanner import ScanConfig, beta_sweep, compute_sample, extract_features, predicted_period, run_scan, \
    to_dataset
from util.special_functions import build_zero_table
from util.verify import run_verification
from util.wave import AsymptoticWave, first_zero_amplitude, zero_amplitudes

log = logging.getLogger('rhwave')

EXIT_OK = 0
EXIT_IO = 3


def _emit(frame, out):
    frame.to_csv(out, index=False, float_format=app.config['CSV_FLOAT_FORMAT'], na_rep='nan')


def _params(args):
    return ModelParams(args.alpha, args.beta, args.rho)


def _sieve_for(limit):
    return build_sieve(limit or app.config['SIEVE_LIMIT'])


def _zeros_for(count):
    return build_zero_table(count or app.config['DEFAULT_ZEROS'])


def cmd_zeros(args, out):
    zeros = build_zero_table(args.count)
    _emit(pd.DataFrame({'ordinate': zeros.ordinates,
                        'zeta_prime_re': zeros.zeta_primes.real,
                        'zeta_prime_im': zeros.zeta_primes.imag},
                       columns=['ordinate', 'zeta_prime_re', 'zeta_prime_im']), out)


def cmd_ck(args, out):
    params = _params(args)
    method = normalize_method(args.method)
    table = None if method == BINOMIAL else _sieve_for(args.sieve_limit)
    result = coefficient(params, args.k, table, method)
    _emit(pd.DataFrame([result._asdict()], columns=list(result._fields)), out)


def cmd_psi(args, out):
    if args.k < 1:
        raise ConfigurationException('psi needs k >= 1, got %d' % args.k)
    params = _params(args)
    method = normalize_method(args.method)
    table = None if method == BINOMIAL else _sieve_for(args.sieve_limit)
    wave = AsymptoticWave(params, _zeros_for(args.zeros)) if args.k >= 2 else None
    sample = compute_sample(params, args.k, table, wave, method)
    _emit(pd.DataFrame([sample._asdict()], columns=list(sample._fields)), out)


def cmd_riesz(args, out):
    table = _sieve_for(args.sieve_limit) if args.x > RIESZ_SERIES_MAX_X else None
    _emit(pd.DataFrame({'x': [args.x], 'F': [riesz_function(args.x, table)]}, columns=['x', 'F']), out)


def cmd_amplitude(args, out):
    params = _params(args)
    zeros = _zeros_for(args.zeros)
    prediction = first_zero_amplitude(params, zeros)
    _emit(pd.DataFrame([prediction._asdict()], columns=list(prediction._fields)), out)
    if zeros.count > 1:
        out.write('\n')
        rows = [row._asdict() for row in zero_amplitudes(params, zeros)]
        _emit(pd.DataFrame(rows, columns=['ordinate', 'amplitude', 'period_x']), out)


def cmd_bounds(args, out):
    params = _params(args)
    query = BoundQuery(params, args.cap, args.target)
    threshold = threshold_x(query, exact=args.exact)
    peak = peak_x(params, args.cap)
    _emit(pd.DataFrame([dict(params.as_dict(), cap=args.cap, target=args.target, peak_x=peak,
                             threshold_x=threshold)],
                       columns=['alpha', 'beta', 'rho', 'cap', 'target', 'peak_x', 'threshold_x']), out)
    if args.emit_curve:
        x_min = args.x_min if args.x_min is not None else max(0.0, peak - 10.0)
        x_max = args.x_max if args.x_max is not None else max(threshold, peak) + 10.0
        out.write('\n')
        _emit(bound_curve(params, args.cap, x_min, x_max), out)


def _features_dict(features):
    return features._asdict() if features is not None else None


def cmd_scan(args, out):
    params = _params(args)
    config = ScanConfig(params, k_min=args.k_min, k_max=args.k_max, points=args.points, stride=args.stride,
                        sieve_limit=args.sieve_limit, method=args.method, zeros_used=args.zeros,
                        output_path=args.out, output_format=args.format, workers=args.workers,
                        resume=args.resume, tail_corrected=args.tail_corrected,
                        trivial_zeros=args.trivial_zeros)
    report = RunReport('scan', config.output_path)
    report.set_config(**config.as_dict())

    table = build_sieve(config.sieve_limit)
    zeros = build_zero_table(config.zeros_used)
    checkpoint = bool(config.output_path) and config.output_format == 'csv'
    samples = run_scan(config, table, zeros, checkpoint=checkpoint)
    dataset = to_dataset(samples, config)

    features = extract_features(samples, period_hint=predicted_period(params, zeros))
    monitor = absolute_bound_monitor(samples)
    report.add_result('rows', len(samples))
    report.add_result('features', _features_dict(features))
    report.add_result('bound_monitor', monitor._asdict())

    if config.output_format == 'json':
        response = JsonResponse(dataset, extra={'features': _features_dict(features),
                                                'bound_monitor': monitor._asdict()})
        if config.output_path:
            response.write_json(config.output_path)
        else:
            out.write(response.json())
            out.write('\n')
    elif not config.output_path:
        out.write(CsvGenerator(dataset).to_csv())

    if config.output_path or app.config.get('RUN_REPORT_DIR'):
        report.write()
    log.info('Scan finished with %d rows, max |psi| %.6g', len(samples), monitor.max_abs_psi)


def cmd_sweep(args, out):
    betas = parse_float_list(args.betas)
    if args.format not in app.config['OUTPUT_FORMATS']:
        raise ConfigurationException('Unknown output format %r' % (args.format,))
    report = RunReport('sweep', args.out)
    report.set_config(alpha=args.alpha, betas=betas, rho=args.rho, k_min=args.k_min, k_max=args.k_max,
                      points=args.points, stride=args.stride, method=normalize_method(args.method),
                      sieve_limit=args.sieve_limit or app.config['SIEVE_LIMIT'], zeros_used=args.zeros,
                      output_path=args.out, output_format=args.format)

    table = _sieve_for(args.sieve_limit)
    zeros = _zeros_for(args.zeros)
    sweep = beta_sweep(args.alpha, betas, args.k_max, table, zeros, k_min=args.k_min, points=args.points,
                       stride=args.stride, rho=args.rho, method=args.method, zeros_used=args.zeros,
                       workers=args.workers)

    onsets = {str(beta): (x if math.isfinite(x) else None) for beta, x in sweep.onsets.items()}
    features = {str(beta): _features_dict(value) for beta, value in sweep.features.items()}
    monitor = absolute_bound_monitor(sweep.dataset)
    report.add_result('onsets', onsets)
    report.add_result('features', features)
    report.add_result('bound_monitor', monitor._asdict())

    if args.format == 'json':
        response = JsonResponse(sweep.dataset, extra={'onsets': onsets,
                                                      'bound_monitor': monitor._asdict()})
        if args.out:
            response.write_json(args.out)
        else:
            out.write(response.json())
            out.write('\n')
    elif args.out:
        CsvGenerator(sweep.dataset).write(args.out)
    else:
        out.write(CsvGenerator(sweep.dataset).to_csv())

    if args.out or app.config.get('RUN_REPORT_DIR'):
        report.write()


def cmd_verify(args, out):
    report = run_verification(args.sieve_limit, extended=args.extended)
    _emit(pd.DataFrame([check._asdict() for check in report.checks],
                       columns=['name', 'passed', 'detail', 'seconds']), out)
    if args.report_dir:
        run_report = RunReport('verify', log_dir=args.report_dir)
        run_report.set_config(sieve_limit=args.sieve_limit or app.config['SIEVE_LIMIT'], extended=args.extended)
        run_report.add_result('verification', report.to_dict())
        run_report.write()
    if not report.passed:
        raise VerificationException('Verification failed: %s' % ', '.join(report.failures),
                                    payload={'failures': report.failures})


def _add_model(parser, rho=True):
    parser.add_argument('--alpha', type=float, required=True, help='alpha > 1/2')
    parser.add_argument('--beta', type=float, required=True, help='beta > 0')
    if rho:
        parser.add_argument('--rho', type=float, default=0.5, help='abscissa of the critical function')
    else:
        parser.set_defaults(rho=0.5)


def _add_grid(parser):
    parser.add_argument('--k-min', type=int, default=1)
    parser.add_argument('--k-max', type=int, default=10 ** 6)
    grid = parser.add_mutually_exclusive_group()
    grid.add_argument('--points', type=int, help='log spaced grid size')
    grid.add_argument('--stride', type=int, help='linear grid step')
    parser.add_argument('--sieve-limit', type=int, default=None)
    parser.add_argument('--zeros', type=int, default=None, help='tabulated zeros in the wave')
    parser.add_argument('--method', default=DIRECT, help='direct, exp or binomial')
    parser.add_argument('--out', help='output file, stdout when omitted')
    parser.add_argument('--format', default='csv', help='csv or json')
    parser.add_argument('--workers', type=int, default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog='rhwave', description='Pochhammer expansion of 1/zeta and its wave')
    parser.add_argument('--version', action='version', version='%(prog)s ' + str(app.config['RHWAVE_VERSION']))
    parser.add_argument('--log-level', default=None, help='override the console log level')
    commands = parser.add_subparsers(dest='command', metavar='command')
    commands.required = True

    zeros = commands.add_parser('zeros', help='refined zeta zeros and zeta prime')
    zeros.add_argument('--count', type=int, default=app.config['DEFAULT_ZEROS'])
    zeros.set_defaults(func=cmd_zeros)

    ck = commands.add_parser('ck', help='one coefficient c_k')
    _add_model(ck, rho=False)
    ck.add_argument('--k', type=int, required=True)
    ck.add_argument('--method', default=DIRECT, help='direct, exp or binomial')
    ck.add_argument('--sieve-limit', type=int, default=None)
    ck.set_defaults(func=cmd_ck)

    psi_parser = commands.add_parser('psi', help='c_k, psi and psi_bar at one k')
    _add_model(psi_parser)
    psi_parser.add_argument('--k', type=int, required=True)
    psi_parser.add_argument('--method', default=DIRECT)
    psi_parser.add_argument('--sieve-limit', type=int, default=None)
    psi_parser.add_argument('--zeros', type=int, default=None)
    psi_parser.set_defaults(func=cmd_psi)

    riesz = commands.add_parser('riesz', help='Riesz function F(x)')
    riesz.add_argument('--x', type=float, required=True)
    riesz.add_argument('--sieve-limit', type=int, default=None)
    riesz.set_defaults(func=cmd_riesz)

    amplitude = commands.add_parser('amplitude', help='predicted wave amplitude and period')
    _add_model(amplitude)
    amplitude.add_argument('--zeros', type=int, default=None)
    amplitude.set_defaults(func=cmd_amplitude)

    bounds = commands.add_parser('bounds', help='crude bound threshold for a truncated sieve')
    _add_model(bounds)
    bounds.add_argument('--cap', type=int, required=True, help='sieve cutoff N')
    bounds.add_argument('--target', type=float, required=True, help='target amplitude')
    bounds.add_argument('--exact', action='store_true', help='use ln(1 - N^-beta)')
    bounds.add_argument('--emit-curve', action='store_true')
    bounds.add_argument('--x-min', type=float, default=None)
    bounds.add_argument('--x-max', type=float, default=None)
    bounds.set_defaults(func=cmd_bounds)

    scan = commands.add_parser('scan', help='c_k, psi and psi_bar over a k grid')
    _add_model(scan)
    _add_grid(scan)
    scan.add_argument('--resume', action='store_true', help='continue a checkpointed csv scan')
    scan.add_argument('--tail-corrected', action='store_true',
                      help='add the terms beyond the sieve to the direct sum')
    scan.add_argument('--trivial-zeros', type=int, default=0, help='trivial zeros added to psi_bar')
    scan.set_defaults(func=cmd_scan)

    sweep = commands.add_parser('sweep', help='scans over several beta at fixed alpha')
    sweep.add_argument('--alpha', type=float, required=True)
    sweep.add_argument('--betas', required=True, help='comma separated, e.g. 4,8,12,20')
    sweep.add_argument('--rho', type=float, default=0.5)
    _add_grid(sweep)
    sweep.set_defaults(func=cmd_sweep)

    verify = commands.add_parser('verify', help='identity and oracle checks')
    verify.add_argument('--extended', action='store_true', help='add the scan based checks')
    verify.add_argument('--sieve-limit', type=int, default=None)
    verify.add_argument('--report-dir', help='write the checks as verify.report.json into this directory')
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if args.log_level:
        root = logging.getLogger()
        for handler in [root] + root.handlers:
            handler.setLevel(args.log_level.upper())

    try:
        args.func(args, out)
    except RHWaveException as e:
        log.error('%s: %s', type(e).__name__, e.message)
        sys.stderr.write('rhwave %s: %s\n' % (args.command, e.message))
        return e.exit_code
    except EnvironmentError as e:
        log.error('I/O error: %s', e)
        sys.stderr.write('rhwave %s: %s\n' % (args.command, e))
        return EXIT_IO
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
