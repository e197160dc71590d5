#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""
Multiscale detection of a signal with unknown location and extent in
Gaussian noise: the scan, the average likelihood ratio, the condensed ALR,
the penalized scan and the blocked scan, with Monte Carlo calibration.
"""

from .signal_model import DomainError  # noqa: F401
from .schema import ConfigError  # noqa: F401
