#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""
The detection statistics: scan, average likelihood ratio (log domain),
condensed ALR, penalized scan and the block maxima of the blocked scan.

Every function takes CumulativeSums, single or batched over replicates, and
optionally a precomputed FamilyReduction over the full family so that one
O(n^2) pass can serve several statistics.  Unsubscripted logs are natural
logs; only ell_max uses log2.
"""

from collections import namedtuple
import math

import numpy as np
from scipy.special import logsumexp

from .interval_stats import IntervalFamily, reduce_family, reduce_full
from .signal_model import DomainError


def _finish(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _full_reduction(s, reduction, need):
    if reduction is None or getattr(reduction, need) is None:
        return reduce_full(s, max_abs=need == "max_abs", log_sum=need == "log_sum")
    if len(reduction.lengths) != s.n:
        raise DomainError("reduction does not cover the full family")
    return reduction


def scan(s, reduction=None):
    """M_n: max |Y_n(I)| over all of J_n"""
    red = _full_reduction(s, reduction, "max_abs")
    return _finish(np.max(red.max_abs, axis=-1))


def log_alr(s, reduction=None):
    """log A_n, with the literal n^2 divisor"""
    red = _full_reduction(s, reduction, "log_sum")
    return _finish(logsumexp(red.log_sum, axis=-1) - 2 * math.log(s.n))


def penalty(lengths, n):
    return np.sqrt(2 * np.log(math.e * n / np.asarray(lengths, dtype=float)))


def penalized_scan(s, reduction=None):
    """P_n: max over J_n of |Y_n(I)| - sqrt(2 log(e n / (k - j)))"""
    red = _full_reduction(s, reduction, "max_abs")
    return _finish(np.max(red.max_abs - penalty(red.lengths, s.n), axis=-1))


def ell_max(n):
    if n < 2:
        raise DomainError("block structure needs n >= 2")
    return int(math.ceil(math.log2(n / math.log(n))))


def block_scales(n):
    """m_l = n 2^-l for l = 1..ell_max, kept exact"""
    return [n * 2.0 ** (-ell) for ell in range(1, ell_max(n) + 1)]


def block_bounds(n):
    """Length ranges (lo, hi] of the blocked scan's ell_max + 1 blocks"""
    m = block_scales(n)
    upper = [float(n)] + m[:-1]
    return list(zip(m, upper)) + [(0.0, m[-1])]


class BlockMaxima(namedtuple("BlockMaxima", ["n", "values"])):
    """values[..., l - 1] = M_{n,l}; the last entry is the small-interval block.

    Empty blocks hold -inf."""

    __slots__ = ()

    @property
    def maximum(self):
        return _finish(np.max(self.values, axis=-1))


def block_maxima(s, reduction=None):
    if s.n < 2:
        raise DomainError("block maxima need n >= 2")
    red = _full_reduction(s, reduction, "max_abs")
    lengths = red.lengths
    cols = []
    for lo, hi in block_bounds(s.n):
        mask = (lengths > lo) & (lengths <= hi)
        if mask.any():
            cols.append(np.max(red.max_abs[..., mask], axis=-1))
        else:
            cols.append(np.full(red.max_abs.shape[:-1], -np.inf))
    return BlockMaxima(s.n, np.stack(cols, axis=-1))


CondensedBlock = namedtuple("CondensedBlock", ["ell", "m", "d", "intervals"])


class CondensedFamily:
    """The approximating family: one d_l-grid block per scale plus all small
    intervals."""

    def __init__(self, n, blocks, small):
        self.n = n
        self.ell_max = len(blocks)
        self.blocks = blocks
        self.small = small
        self.total_cardinality = (
            sum(b.intervals.cardinality for b in blocks) + small.cardinality
        )

    def families(self):
        return [b.intervals for b in self.blocks] + [self.small]

    def __len__(self):
        return self.total_cardinality

    def __contains__(self, interval):
        return any(interval in f for f in self.families())

    def as_set(self):
        out = set()
        for f in self.families():
            out |= f.as_set()
        return out

    def to_report(self):
        return {
            "n": self.n,
            "ell_max": self.ell_max,
            "blocks": [
                {
                    "ell": b.ell,
                    "m": b.m,
                    "d": b.d,
                    "min_length_exclusive": b.intervals.lo,
                    "max_length": b.intervals.hi,
                    "count": b.intervals.cardinality,
                }
                for b in self.blocks
            ],
            "small": {"max_length": self.small.hi, "count": self.small.cardinality},
            "total": self.total_cardinality,
            "bound": 9 * self.n * math.log(self.n) ** 2,
        }


def build_condensed_family(n):
    if n < 3:
        raise DomainError("the condensed family needs n >= 3")
    logn = math.log(n)
    blocks = []
    for ell, m in enumerate(block_scales(n), start=1):
        d = int(math.ceil(math.sqrt(m) * ell**0.8 / logn))
        blocks.append(
            CondensedBlock(ell, m, d, IntervalFamily("app(%d)" % ell, n, d, m, 2 * m))
        )
    small = IntervalFamily("small", n, 1, 0, blocks[-1].m)
    # (m_l, 2 m_l] ranges are disjoint by construction and small ends at m_lmax
    for a, b in zip(blocks, blocks[1:]):
        assert b.intervals.hi <= a.intervals.lo
    assert small.hi <= blocks[-1].intervals.lo
    return CondensedFamily(n, blocks, small)


def evaluate_condensed(s, fam):
    """(log A_n,cond, number of interval statistics evaluated per replicate)"""
    if fam.n != s.n:
        raise DomainError(
            "condensed family built for n=%d used with n=%d data" % (fam.n, s.n)
        )
    parts = []
    evaluations = 0
    for f in fam.families():
        red = reduce_family(s, f, max_abs=False, log_sum=True)
        evaluations += red.evaluations
        parts.append(red.log_sum)
    log_sums = np.concatenate(parts, axis=-1)
    value = logsumexp(log_sums, axis=-1) - math.log(fam.total_cardinality)
    return _finish(value), evaluations


def condensed_alr(s, fam):
    return evaluate_condensed(s, fam)[0]
