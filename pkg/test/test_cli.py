import io
import json
import logging
import os
import shutil
import tempfile
import unittest

import mock
import pandas as pd

from engine import app
from scripts.rhwave import main
from util.common import ZeroRefinementException
from util.verify import CheckResult, VerificationReport


logging.basicConfig()
log = logging.getLogger()
log.setLevel(logging.INFO)


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tempdir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tempdir)

    def run_cli(self, *argv):
        out = io.StringIO()
        code = main(list(argv), out=out)
        return code, out.getvalue()

    def frame(self, text):
        return pd.read_csv(io.StringIO(text))

    def test_zeros(self):
        code, text = self.run_cli('zeros', '--count', '2')
        self.assertEqual(code, 0)
        frame = self.frame(text)
        self.assertEqual(list(frame.columns), ['ordinate', 'zeta_prime_re', 'zeta_prime_im'])
        self.assertAlmostEqual(frame['ordinate'][0], 14.134725141734693, places=9)
        self.assertEqual(len(frame), 2)

    def test_ck(self):
        code, text = self.run_cli('ck', '--alpha', '2', '--beta', '2', '--k', '1', '--method', 'binomial')
        self.assertEqual(code, 0)
        frame = self.frame(text)
        self.assertEqual(list(frame.columns), ['value', 'tail_bound', 'terms_used', 'method'])
        self.assertEqual(frame['method'][0], 'binomial')

    def test_ck_direct_small_sieve(self):
        code, text = self.run_cli('ck', '--alpha', '3.5', '--beta', '4', '--k', '10', '--sieve-limit', '1000')
        self.assertEqual(code, 0)
        self.assertEqual(self.frame(text)['terms_used'][0] > 0, True)

    def test_psi(self):
        code, text = self.run_cli('psi', '--alpha', '2', '--beta', '2', '--k', '100', '--sieve-limit', '1000')
        self.assertEqual(code, 0)
        self.assertEqual(list(self.frame(text).columns), ['k', 'x', 'c_k', 'psi', 'psi_bar', 'tail_bound'])

    def test_psi_k_zero(self):
        code, _ = self.run_cli('psi', '--alpha', '2', '--beta', '2', '--k', '0', '--sieve-limit', '1000')
        self.assertEqual(code, 2)

    def test_riesz(self):
        code, text = self.run_cli('riesz', '--x', '1.0')
        self.assertEqual(code, 0)
        self.assertEqual(list(self.frame(text).columns), ['x', 'F'])

    def test_amplitude(self):
        code, text = self.run_cli('amplitude', '--alpha', '2', '--beta', '2')
        self.assertEqual(code, 0)
        frame = self.frame(text)
        self.assertAlmostEqual(frame['amplitude'][0] / 0.000078, 1.0, delta=0.01)

    def test_bounds(self):
        code, text = self.run_cli('bounds', '--alpha', '3.5', '--beta', '4', '--cap', '1000000',
                                  '--target', '0.008411')
        self.assertEqual(code, 0)
        frame = self.frame(text)
        self.assertEqual(list(frame.columns), ['alpha', 'beta', 'rho', 'cap', 'target', 'peak_x', 'threshold_x'])
        self.assertAlmostEqual(frame['threshold_x'][0], 60.0, delta=1.0)

    def test_bounds_curve(self):
        code, text = self.run_cli('bounds', '--alpha', '2', '--beta', '2', '--cap', '1000', '--target', '0.000078',
                                  '--emit-curve', '--x-min', '0', '--x-max', '1')
        self.assertEqual(code, 0)
        header, curve = text.split('\n\n')
        self.assertEqual(list(self.frame(curve).columns), ['x', 'bound', 'bound_exact'])
        self.assertEqual(len(self.frame(curve)), 11)

    def test_scan_stdout(self):
        code, text = self.run_cli('scan', '--alpha', '2', '--beta', '2', '--k-max', '1000', '--points', '10',
                                  '--sieve-limit', '1000', '--workers', '1')
        self.assertEqual(code, 0)
        frame = self.frame(text)
        self.assertEqual(list(frame.columns), app.config['SCAN_COLUMNS'])
        self.assertEqual(frame['k'].iloc[0], 1)
        self.assertEqual(frame['k'].iloc[-1], 1000)

    def test_scan_file_and_report(self):
        path = os.path.join(self.tempdir, 'riesz.csv')
        code, text = self.run_cli('scan', '--alpha', '2', '--beta', '2', '--k-max', '1000', '--points', '10',
                                  '--sieve-limit', '1000', '--out', path)
        self.assertEqual(code, 0)
        self.assertEqual(text, '')
        self.assertEqual(len(pd.read_csv(path)), 10)
        with open(os.path.join(self.tempdir, 'riesz.report.json')) as fh:
            report = json.load(fh)
        self.assertEqual(report['command'], 'scan')
        self.assertEqual(report['results']['rows'], 10)
        self.assertIn('bound_monitor', report['results'])

        code, _ = self.run_cli('scan', '--alpha', '2', '--beta', '2', '--k-max', '1000', '--points', '10',
                               '--sieve-limit', '1000', '--out', path, '--resume')
        self.assertEqual(code, 0)
        self.assertEqual(len(pd.read_csv(path)), 10)

        code, _ = self.run_cli('scan', '--alpha', '2', '--beta', '4', '--k-max', '1000', '--points', '10',
                               '--sieve-limit', '1000', '--out', path, '--resume')
        self.assertEqual(code, 2)

    def test_scan_tail_corrected(self):
        code, text = self.run_cli('scan', '--alpha', '2', '--beta', '2', '--k-max', '100', '--points', '5',
                                  '--sieve-limit', '1000', '--tail-corrected', '--trivial-zeros', '2')
        self.assertEqual(code, 0)
        self.assertEqual(len(self.frame(text)), 5)
        code, _ = self.run_cli('scan', '--alpha', '2', '--beta', '2', '--k-max', '1000000', '--points', '5',
                               '--sieve-limit', '1000', '--tail-corrected')
        self.assertEqual(code, 2)

    def test_scan_json(self):
        code, text = self.run_cli('scan', '--alpha', '2', '--beta', '2', '--k-max', '100', '--points', '5',
                                  '--sieve-limit', '1000', '--format', 'json')
        self.assertEqual(code, 0)
        data = json.loads(text)
        self.assertEqual(len(data['data']), 5)
        self.assertIn('features', data)
        self.assertIsNone(data['data'][0]['psi_bar'])

    def test_sweep(self):
        code, text = self.run_cli('sweep', '--alpha', '2', '--betas', '2,4', '--k-max', '100', '--points', '5',
                                  '--sieve-limit', '1000')
        self.assertEqual(code, 0)
        frame = self.frame(text)
        self.assertEqual(list(frame.columns), ['beta'] + app.config['SCAN_COLUMNS'])
        self.assertEqual(sorted(set(frame['beta'])), [2.0, 4.0])

    def test_configuration_errors(self):
        for argv in (('ck', '--alpha', '0.4', '--beta', '2', '--k', '1'),
                     ('ck', '--alpha', '2', '--beta', '2', '--k', '100', '--method', 'binomial'),
                     ('scan', '--alpha', '2', '--beta', '2', '--k-max', '10', '--format', 'xml',
                      '--sieve-limit', '100'),
                     ('sweep', '--alpha', '2', '--betas', '2,x', '--k-max', '10'),
                     ('bounds', '--alpha', '2', '--beta', '2', '--cap', '1', '--target', '0.1')):
            self.assertEqual(self.run_cli(*argv)[0], 2, argv)

    def test_usage_error(self):
        with self.assertRaises(SystemExit) as context:
            main(['scan', '--alpha', '2'], out=io.StringIO())
        self.assertEqual(context.exception.code, 2)

    def test_write_error(self):
        blocker = os.path.join(self.tempdir, 'blocker')
        with open(blocker, 'w') as fh:
            fh.write('x')
        code, _ = self.run_cli('scan', '--alpha', '2', '--beta', '2', '--k-max', '10', '--points', '3',
                               '--sieve-limit', '100', '--out', os.path.join(blocker, 'scan.csv'))
        self.assertEqual(code, 3)

    def test_computation_error(self):
        with mock.patch('scripts.rhwave.build_zero_table', side_effect=ZeroRefinementException('no zero', 0)):
            self.assertEqual(self.run_cli('zeros')[0], 1)

    def test_verify_failure(self):
        report = VerificationReport()
        report.checks.append(CheckResult('first zero', False, 't1 off', 0.0))
        with mock.patch('scripts.rhwave.run_verification', return_value=report):
            code, text = self.run_cli('verify', '--report-dir', self.tempdir)
        self.assertEqual(code, 1)
        self.assertEqual(list(self.frame(text).columns), ['name', 'passed', 'detail', 'seconds'])
        with open(os.path.join(self.tempdir, 'verify.report.json')) as fh:
            self.assertFalse(json.load(fh)['results']['verification']['passed'])
