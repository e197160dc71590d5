#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

import functools

from multiscan import detectors
from multiscan.mod import DetectorModule


@functools.lru_cache(maxsize=16)
def _family(n):
    return detectors.build_condensed_family(n)


class CondensedALRModule(DetectorModule):
    """ALR averaged over the approximating family only, O(n log^2 n)"""

    name = "condensed_alr"
    title = "condensed ALR"

    def family(self, n):
        return _family(n)

    def evaluate(self, s, reduction=None):
        return detectors.condensed_alr(s, self.family(s.n))

    def describe(self, n):
        info = super().describe(n)
        info["family"] = self.family(n).to_report()
        return info
