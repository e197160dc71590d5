#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""
Standardized interval sums and the interval families they are reduced over.

Prefix sums are plain double precision; the absolute error is O(n ulp), far
below every tolerance used downstream, so no compensated summation is done.
"""

from collections import namedtuple
import math

import numpy as np
from scipy.special import logsumexp

from .signal_model import DomainError, IntervalIndex


def ystat(s, interval):
    """(s[k] - s[j]) / sqrt(k - j)"""
    j, k = IntervalIndex(*interval).check(s.n)
    return (s.s[..., k] - s.s[..., j]) / math.sqrt(k - j)


class IntervalFamily:
    """All (j, k) with j and k multiples of step and lo < k - j <= hi.

    lo and hi are real; they are compared against the integer lengths
    without rounding.  Members are never materialized unless iterated."""

    def __init__(self, label, n, step=1, lo=0, hi=None):
        if n < 1:
            raise DomainError("n must be positive")
        if step < 1:
            raise DomainError("grid step must be positive")
        self.label = label
        self.n = n
        self.step = int(step)
        self.lo = lo
        self.hi = n if hi is None else hi
        self._widths = self._compute_widths()

    def _compute_widths(self):
        # t counts grid steps, so the interval length is t * step
        tmax = self.n // self.step
        t = np.arange(1, tmax + 1)
        lengths = t * self.step
        return t[(lengths > self.lo) & (lengths <= self.hi)]

    @property
    def grid_size(self):
        return self.n // self.step + 1

    def widths(self):
        return self._widths

    def lengths(self):
        return self._widths * self.step

    @property
    def cardinality(self):
        return int(np.sum(self.grid_size - self._widths))

    def __len__(self):
        return self.cardinality

    def __iter__(self):
        for t in self._widths:
            length = int(t) * self.step
            for j in range(0, self.n - length + 1, self.step):
                yield IntervalIndex(j, j + length)

    def __contains__(self, interval):
        j, k = interval
        if not (0 <= j < k <= self.n):
            return False
        if j % self.step or k % self.step:
            return False
        return self.lo < k - j <= self.hi

    def as_set(self):
        return {(i.j, i.k) for i in self}

    def isdisjoint(self, other):
        return not (self.as_set() & other.as_set())

    def __repr__(self):
        return "IntervalFamily(%r, n=%d, step=%d, lo=%r, hi=%r)" % (
            self.label,
            self.n,
            self.step,
            self.lo,
            self.hi,
        )


def full_family(n):
    return IntervalFamily("full", n, 1, 0, n)


class FamilyReduction(
    namedtuple("FamilyReduction", ["lengths", "max_abs", "log_sum", "evaluations"])
):
    """Per interval length: max |Y_n(I)| and logsumexp of Y_n(I)^2 / 2.

    max_abs and log_sum carry the replicate axes of the input followed by
    one column per length; either is None when it was not requested.
    evaluations counts interval statistics per replicate."""

    __slots__ = ()


def reduce_family(s, family, max_abs=True, log_sum=True):
    if family.n != s.n:
        raise DomainError(
            "family built for n=%d used with n=%d data" % (family.n, s.n)
        )
    widths = family.widths()
    lead = s.s.shape[:-1]
    maxima = np.full(lead + (len(widths),), -np.inf) if max_abs else None
    sums = np.full(lead + (len(widths),), -np.inf) if log_sum else None
    grid = s.s[..., :: family.step]
    evaluations = 0
    for col, t in enumerate(widths):
        t = int(t)
        y = (grid[..., t:] - grid[..., :-t]) / math.sqrt(t * family.step)
        evaluations += y.shape[-1]
        if max_abs:
            maxima[..., col] = np.max(np.abs(y), axis=-1)
        if log_sum:
            sums[..., col] = logsumexp(0.5 * y * y, axis=-1)
    return FamilyReduction(family.lengths(), maxima, sums, evaluations)


def reduce_full(s, max_abs=True, log_sum=True):
    return reduce_family(s, full_family(s.n), max_abs=max_abs, log_sum=log_sum)


def locate(s):
    """The interval attaining the scan maximum (first by length, then start)"""
    if s.batched:
        raise DomainError("locate works on a single data vector")
    best, where = -np.inf, None
    for length in range(1, s.n + 1):
        y = np.abs(s.s[length:] - s.s[:-length]) / math.sqrt(length)
        j = int(np.argmax(y))
        if y[j] > best:
            best, where = y[j], IntervalIndex(j, j + length)
    return where
