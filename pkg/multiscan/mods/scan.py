#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

from multiscan import detectors
from multiscan.mod import DetectorModule


class ScanModule(DetectorModule):
    """The scan: maximum of |Y_n(I)| over all intervals"""

    name = "scan"
    title = "scan"
    reductions = ("max_abs",)

    def evaluate(self, s, reduction=None):
        return detectors.scan(s, reduction)
