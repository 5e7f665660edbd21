# Site overrides for config/default.py, e.g. a larger desk machine:
# SIEVE_LIMIT = 10000000
# SCAN_WORKERS = 8
