#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

from multiscan import detectors
from multiscan.mod import DetectorModule


class ALRModule(DetectorModule):
    """Average likelihood ratio over all intervals, in the log domain.

    Costs O(n^2) per evaluation, which makes its calibration the dominant
    cost of any study it takes part in."""

    name = "alr"
    title = "ALR"
    reductions = ("log_sum",)

    def evaluate(self, s, reduction=None):
        return detectors.log_alr(s, reduction)
