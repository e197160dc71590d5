#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

from multiscan import detectors
from multiscan.mod import DetectorModule


class BlockedScanModule(DetectorModule):
    """Scan split into blocks of comparable length, each with its own
    critical value; see calibration.calibrate_blocked"""

    name = "blocked_scan"
    title = "blocked scan"
    reductions = ("max_abs",)
    blocked = True

    def evaluate(self, s, reduction=None):
        return detectors.block_maxima(s, reduction)

    def describe(self, n):
        info = super().describe(n)
        info["blocks"] = [
            {"min_length_exclusive": lo, "max_length": hi}
            for lo, hi in detectors.block_bounds(n)
        ]
        return info
