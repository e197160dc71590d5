#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

from multiscan import detectors
from multiscan.mod import DetectorModule


class PenalizedScanModule(DetectorModule):
    """Scan with the scale penalty sqrt(2 log(e n / (k - j))) subtracted"""

    name = "penalized_scan"
    title = "penalized scan"
    reductions = ("max_abs",)

    def evaluate(self, s, reduction=None):
        return detectors.penalized_scan(s, reduction)
