# extensions.py
import logging
import os
import sys

import numba
import structlog

# every compiled kernel goes through this decorator
jit = numba.njit(cache=True)


def configure_logging(level='INFO'):
    """Route structlog output to stderr at the given level."""
    numeric = getattr(logging, str(level).upper(), logging.INFO)
    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt='iso'),
            structlog.dev.ConsoleRenderer(colors=False),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric),
        # stderr is looked up per logger so redirected streams are honoured
        logger_factory=lambda *args: structlog.PrintLogger(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


configure_logging(os.environ.get('DTCRES_LOG_LEVEL', 'INFO'))
