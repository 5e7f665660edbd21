# RH Wave Gunicorn configuration file.
import os
import sys

# Add the current directory to the PYTHONPATH
sys.path.append(os.getcwd())

#
# Server socket
#
bind = '0.0.0.0:5000'
backlog = 64

#
# Worker processes
#
#   Scans are CPU bound and each one already runs SCAN_WORKERS threads,
#   so keep the process count near the core count divided by that.
#
#   The sync worker is required: util.timeout aborts requests with SIGALRM,
#   which only works on the main thread. timeout must stay above
#   REQUEST_TIMEOUT_SECONDS so the request timeout fires first.
#
workers = 2
threads = 1
worker_class = 'sync'
timeout = 3700
max_requests = 100
graceful_timeout = 300
keepalive = 2

#
# Server mechanics
#
daemon = False
pidfile = None
umask = 0
user = None
group = None
tmp_upload_dir = None

#
# Logging
#
errorlog = '-'
loglevel = 'info'
accesslog = '-'

#
# Process naming
#
proc_name = 'rhwave'


#
# Server hooks
#
#   post_fork - Called just after a worker has been forked.
#

def post_fork(server, worker):
    server.log.info("Worker spawned (pid: %s)", worker.pid)
    # refine the default zero table once per worker, later requests hit the cache
    from engine import app
    from util.special_functions import build_zero_table
    build_zero_table(app.config['DEFAULT_ZEROS'])
    worker.log.debug('Zero table ready')
