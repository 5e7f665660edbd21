import json
import logging

from flask import request, Response, jsonify

from engine import app
from util.bounds import BoundQuery, absolute_bound_monitor, peak_x, threshold_x
from util.coefficients import ModelParams, coefficient, normalize_method, BINOMIAL, DIRECT
from util.common import RHWaveException, MalformedRequestException, ConfigurationException, finite_or_none
from util.jsonresponse import JsonResponse
from util.mobius import build_sieve
from util.releasenotes import ReleaseNotes, ComponentDecoder
from util.scanner import ScanConfig, compute_sample, extract_features, predicted_period, run_scan, to_dataset
from util.special_functions import build_zero_table
from util.timeout import set_timeout
from util.wave import AsymptoticWave, first_zero_amplitude, zero_amplitudes

log = logging.getLogger(__name__)

release = ReleaseNotes.instance()
log.info('Starting {} v{} {} ({})'.format(
    release.component_name,
    release.latest_version,
    release.latest_descriptor,
    release.latest_date))


@app.errorhandler(Exception)
def handle_exception(error):
    if isinstance(error, RHWaveException):
        error_dict = error.to_dict()
        status_code = error.status_code
    else:
        log.exception('error during request')
        error_dict = {'message': 'Unexpected internal error during request'}
        status_code = 500
    response = jsonify(error_dict)
    response.status_code = status_code
    log.info('Returning exception: %s', error_dict)
    return response, status_code


@app.before_request
def log_request():
    log.info('Handling request to %r - %r', request.url, request.get_data(as_text=True)[:200])


def _input():
    input_data = request.get_json(silent=True)
    if not isinstance(input_data, dict):
        raise MalformedRequestException('Request body must be a JSON object')
    return input_data


def _get(input_data, name, cast=float, default=None):
    value = input_data.get(name, default)
    if value is None:
        if default is None and name not in input_data:
            raise MalformedRequestException('Missing mandatory field %r' % name)
        return None
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise MalformedRequestException('Field %r must be %s, got %r' % (name, cast.__name__, value))


def _params(input_data):
    return ModelParams(_get(input_data, 'alpha'), _get(input_data, 'beta'), _get(input_data, 'rho', default=0.5))


def _optional_int(input_data, name):
    return _get(input_data, name, int, default=None) if input_data.get(name) is not None else None


def _json_response(data):
    return Response(json.dumps(data, indent=2, separators=(',', ': ')), mimetype='application/json')


##########################
# ROUTES
##########################

# Model requests share the fields
#
# {
#     'alpha': 2.0,
#     'beta': 2.0,
#     'rho': 0.5,          optional
#     'method': 'direct',  optional, direct | exp | binomial
#     'sieve_limit': N,    optional, SIEVE_LIMIT
#     'zeros': n           optional, DEFAULT_ZEROS
# }

@app.route('/version', methods=['GET'])
@set_timeout()
def version():
    return Response(json.dumps(release.component, cls=ComponentDecoder, indent=2, separators=(',', ': ')),
                    mimetype='application/json')


@app.route('/zeros', methods=['GET'])
@set_timeout()
def zeros():
    """
    Refined zeros 1/2 + it with zeta' at each, ?count=N
    """
    try:
        count = int(request.args.get('count', app.config['DEFAULT_ZEROS']))
    except ValueError:
        raise MalformedRequestException('count must be an integer, got %r' % request.args.get('count'))
    table = build_zero_table(count)
    return _json_response({'zeros': [{'ordinate': record.ordinate,
                                      'zeta_prime': [record.zeta_prime.real, record.zeta_prime.imag]}
                                     for record in table]})


@app.route('/ck', methods=['POST'])
@set_timeout()
def ck():
    """
    One coefficient c_k, request fields alpha, beta, k and optionally method and sieve_limit
    """
    input_data = _input()
    params = _params(input_data)
    method = normalize_method(input_data.get('method', DIRECT))
    k = _get(input_data, 'k', int)
    table = None if method == BINOMIAL else build_sieve(_optional_int(input_data, 'sieve_limit')
                                                        or app.config['SIEVE_LIMIT'])
    result = coefficient(params, k, table, method)
    return _json_response(dict(params.as_dict(), k=k, value=result.value,
                               tail_bound=finite_or_none(result.tail_bound),
                               terms_used=result.terms_used, method=result.method))


@app.route('/psi', methods=['POST'])
@set_timeout()
def psi():
    """
    c_k, psi and psi_bar at one k >= 1
    """
    input_data = _input()
    params = _params(input_data)
    method = normalize_method(input_data.get('method', DIRECT))
    k = _get(input_data, 'k', int)
    if k < 1:
        raise ConfigurationException('psi needs k >= 1, got %d' % k)
    table = None if method == BINOMIAL else build_sieve(_optional_int(input_data, 'sieve_limit')
                                                        or app.config['SIEVE_LIMIT'])
    wave = None
    if k >= 2:
        wave = AsymptoticWave(params, build_zero_table(_optional_int(input_data, 'zeros')
                                                       or app.config['DEFAULT_ZEROS']))
    sample = compute_sample(params, k, table, wave, method)
    return _json_response(dict(params.as_dict(), **{key: (value if key == 'k' else finite_or_none(value))
                                                     for key, value in sample._asdict().items()}))


@app.route('/amplitude', methods=['POST'])
@set_timeout()
def amplitude():
    """
    Predicted amplitude and period of the first zero's wave, plus one row per requested zero
    """
    input_data = _input()
    params = _params(input_data)
    table = build_zero_table(_optional_int(input_data, 'zeros') or app.config['DEFAULT_ZEROS'])
    prediction = first_zero_amplitude(params, table)
    return _json_response(dict(params.as_dict(), amplitude=prediction.amplitude, period_x=prediction.period_x,
                               zeros=[row._asdict() for row in zero_amplitudes(params, table)]))


@app.route('/bounds', methods=['POST'])
@set_timeout()
def bounds():
    """
    Threshold x beyond which the crude bound for the sieve cut at 'cap' stays below 'target'
    """
    input_data = _input()
    params = _params(input_data)
    cap = _get(input_data, 'cap', int)
    target = _get(input_data, 'target')
    exact = bool(input_data.get('exact', False))
    threshold = threshold_x(BoundQuery(params, cap, target), exact=exact)
    return _json_response(dict(params.as_dict(), cap=cap, target=target, exact=exact,
                               peak_x=peak_x(params, cap), threshold_x=threshold))


@app.route('/scan', methods=['POST'])
@set_timeout()
def scan():
    """
    Synchronous scan, limited to HTTP_SCAN_MAX_POINTS grid points. Returns the rows, the
    oscillation features and the absolute bound monitor as JSON.
    """
    input_data = _input()
    params = _params(input_data)
    config = ScanConfig(params,
                        k_min=_get(input_data, 'k_min', int, default=1),
                        k_max=_get(input_data, 'k_max', int),
                        points=_optional_int(input_data, 'points'),
                        stride=_optional_int(input_data, 'stride'),
                        sieve_limit=_optional_int(input_data, 'sieve_limit'),
                        method=input_data.get('method', DIRECT),
                        zeros_used=_optional_int(input_data, 'zeros'),
                        output_format='json',
                        tail_corrected=bool(input_data.get('tail_corrected', False)),
                        trivial_zeros=_get(input_data, 'trivial_zeros', int, default=0))
    size = config.grid().size
    if size > app.config['HTTP_SCAN_MAX_POINTS']:
        raise ConfigurationException('Grid of %d points exceeds the synchronous limit of %d, use the CLI'
                                     % (size, app.config['HTTP_SCAN_MAX_POINTS']))

    table = build_sieve(config.sieve_limit)
    zero_table = build_zero_table(config.zeros_used)
    samples = run_scan(config, table, zero_table)
    features = extract_features(samples, period_hint=predicted_period(params, zero_table))
    monitor = absolute_bound_monitor(samples)
    response = JsonResponse(to_dataset(samples, config), extra={'features': features._asdict(),
                                                                'bound_monitor': monitor._asdict()})
    return Response(response.json(), mimetype='application/json')
