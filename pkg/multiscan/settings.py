#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""
Settings for multiscan.

Everything here is resolved from the environment so that library users and
the command line front end see the same cache and logging behaviour.
"""
import logging.config
import os

# Build paths inside the project like this: os.path.join(BASE_DIR, ...)
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

with open(os.path.join(BASE_DIR, "VERSION"), "r") as _f:
    VERSION = _f.read().strip()

# Offset A in the blocked scan's per-block levels alpha~/(A + l)^2
DEFAULT_A_OFFSET = 10

# Full ALR power studies above this sample size need the long-run flag
LONG_RUN_ALR_N = 2000

# Replicates per worker task
DEFAULT_CHUNK = 64


def env_detect():
    debug = bool(os.environ.get("MULTISCAN_DEBUG", False))
    if "MULTISCAN_CACHE_DIR" in os.environ:
        cache_dir = os.environ["MULTISCAN_CACHE_DIR"]
    elif "XDG_CACHE_HOME" in os.environ:
        cache_dir = os.path.join(os.environ["XDG_CACHE_HOME"], "multiscan")
    else:
        cache_dir = os.path.join(os.path.expanduser("~"), ".cache", "multiscan")
    return debug, cache_dir


DEBUG, CACHE_DIR = env_detect()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "brief": {"format": "%(asctime)s %(levelname)s %(name)s: %(message)s"}
    },
    "handlers": {
        "console": {
            "level": "DEBUG",
            "class": "logging.StreamHandler",
            "formatter": "brief",
            "stream": "ext://sys.stderr",
        },
        "null": {"level": "DEBUG", "class": "logging.NullHandler"},
    },
    "loggers": {
        "multiscan": {"handlers": ["console"], "level": "INFO", "propagate": False},
        # joblib chatter is only interesting when debugging a worker pool
        "joblib": {"handlers": ["null"], "propagate": False, "level": "DEBUG"},
    },
}


def configure_logging(debug=None):
    if debug is None:
        debug = DEBUG
    config = dict(LOGGING)
    config["loggers"] = dict(LOGGING["loggers"])
    config["loggers"]["multiscan"] = dict(
        LOGGING["loggers"]["multiscan"], level="DEBUG" if debug else "INFO"
    )
    logging.config.dictConfig(config)
