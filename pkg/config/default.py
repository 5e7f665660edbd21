import os
from util.releasenotes import ReleaseNotes

############################
# General Settings         #
############################
DEBUG = False
RHWAVE_VERSION = ReleaseNotes.instance().latest_version
LOGGING_CONFIG = 'logging.conf'
REQUEST_TIMEOUT_SECONDS = 3600  # 60 minutes
CONFIG_DIR = os.path.dirname(__file__)
# Directory for JSON run reports, None writes the report next to the scan output
RUN_REPORT_DIR = None


############################
# Mobius Sieve Settings    #
############################
SIEVE_LIMIT = 1000000
# Memory ceiling in table entries. The build holds one int32 smallest prime factor
# plus one int8 mobius value per entry (5 bytes), the finished table keeps 1 byte.
# Each cached (alpha, beta) series adds about 20 bytes per entry, see SERIES_CACHE_SIZE.
SIEVE_CEILING = 1000000000


############################
# Coefficient Settings     #
############################
# exp(-745) is below the smallest positive binary64 number
WINDOW_THRESHOLD = 745.0
# Alternating binomial sums (coefficients and reciprocal Pochhammer) lose all digits past this k
BINOMIAL_MAX_K = 40
POISSON_MAX_K = 200
# Number of (limit, alpha, beta) weight arrays kept in memory. Each holds four 8 byte arrays
# over the squarefree n <= limit (about 0.61 limit of them), roughly 20 bytes per sieve entry.
SERIES_CACHE_SIZE = 16
# Largest k limit^-beta for which the direct sum adds the terms beyond the sieve
TAIL_CORRECTION_MAX_RATE = 0.01
# Above this k the Pochhammer product is evaluated through log-gamma
POCHHAMMER_PRODUCT_MAX_K = 1000000
POCHHAMMER_CHUNK = 1 << 20


############################
# Zeta Zero Settings       #
############################
DEFAULT_ZEROS = 1
MAX_ZEROS = 30
ZERO_TOLERANCE = 1e-8
ZERO_BRACKET = 0.01
# Digits targeted by the accelerated eta series
ZETA_DIGITS = 16


############################
# Bound Settings           #
############################
THRESHOLD_RESOLUTION = 0.1
# |1/zeta(1/2) - 1|, conjectured absolute bound of the critical function (monitored, never asserted)
ABSOLUTE_BOUND = 1.68477


############################
# Scan Settings            #
############################
SCAN_WORKERS = 4
SCAN_POINTS = 400
# Rows flushed to a checkpointed output per batch
SCAN_CHUNK = 50
MAX_SCAN_K = 10 ** 10
CSV_FLOAT_FORMAT = '%.17g'
SCAN_COLUMNS = ['k', 'x', 'c_k', 'psi', 'psi_bar', 'tail_bound']
OUTPUT_FORMATS = ['csv', 'json']
# Largest grid served synchronously by POST /scan
HTTP_SCAN_MAX_POINTS = 2000
