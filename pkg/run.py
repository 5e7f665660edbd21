#!/usr/bin/env python
from engine.routes import app

# The reloader must be disabled so requests
# run on the main thread (SIGALRM timeouts)
app.run(debug=True, use_reloader=False)
