#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""
The sampled data model: Y_i = mu * 1{j < i <= k} + Z_i, i = 1..n, with
Z_i i.i.d. standard normal.

Noise comes from numpy's counter-based Philox bit generator, keyed by
(seed, stream, replicate, substream) through a SeedSequence spawn key, and
normals are drawn with Generator.standard_normal (ziggurat).  Seeded results
depend on both choices.
"""

from collections import namedtuple
import math

import numpy as np

# Seed streams.  Power studies use POWER + grid index.
STREAM_DEFAULT = 0
STREAM_CALIBRATION = 1
STREAM_VALIDATION = 2
STREAM_BENCHMARK = 3
STREAM_POWER = 100

SUBSTREAM_NOISE = 0
SUBSTREAM_PLACEMENT = 1


class DomainError(ValueError):
    pass


class IntervalIndex(namedtuple("IntervalIndex", ["j", "k"])):
    """The interval (j/n, k/n]; design point i belongs to it iff j < i <= k"""

    __slots__ = ()

    @property
    def length(self):
        return self.k - self.j

    def scale(self, n):
        return (self.k - self.j) / n

    def check(self, n):
        if not (0 <= self.j < self.k <= n):
            raise DomainError(
                "invalid interval (%d, %d] for n=%d" % (self.j, self.k, n)
            )
        return self

    def reversed(self, n):
        return IntervalIndex(n - self.k, n - self.j)


class SignalSpec(namedtuple("SignalSpec", ["n", "mu", "support"])):
    __slots__ = ()

    @property
    def norm(self):
        return abs(self.mu) * math.sqrt(self.support.length / self.n)

    @property
    def is_null(self):
        return self.mu == 0

    @property
    def expected_ystat(self):
        """Noiseless value of the standardized sum over the support"""
        return self.mu * math.sqrt(self.support.length)

    def mean_vector(self):
        f = np.zeros(self.n)
        f[self.support.j : self.support.k] = self.mu
        return f


class SeedRecord(namedtuple("SeedRecord", ["seed", "replicate", "stream"])):
    __slots__ = ()

    def __new__(cls, seed, replicate=0, stream=STREAM_DEFAULT):
        if not (0 <= int(seed) < 2**64):
            raise DomainError("seed must be a 64-bit unsigned integer")
        return super().__new__(cls, int(seed), int(replicate), int(stream))

    def at(self, replicate):
        return SeedRecord(self.seed, replicate, self.stream)

    def with_stream(self, stream):
        return SeedRecord(self.seed, self.replicate, stream)

    def generator(self, substream=SUBSTREAM_NOISE):
        ss = np.random.SeedSequence(
            self.seed, spawn_key=(self.stream, self.replicate, substream)
        )
        return np.random.Generator(np.random.Philox(ss))

    def to_json(self):
        return {"seed": self.seed, "replicate": self.replicate, "stream": self.stream}

    @classmethod
    def from_json(cls, data):
        return cls(data["seed"], data.get("replicate", 0), data.get("stream", 0))


DataVector = namedtuple("DataVector", ["values", "seed"])


class CumulativeSums(namedtuple("CumulativeSums", ["s"])):
    """Prefix sums s[0] = 0, s[i] = s[i-1] + Y_i along the last axis.

    A leading axis, when present, indexes Monte Carlo replicates."""

    __slots__ = ()

    @property
    def n(self):
        return self.s.shape[-1] - 1

    @property
    def batched(self):
        return self.s.ndim > 1


def make_signal(n, norm, support, sign=1):
    if n < 1:
        raise DomainError("n must be positive")
    if norm < 0:
        raise DomainError("signal norm must be nonnegative")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    support = IntervalIndex(*support).check(n)
    mu = sign * norm / math.sqrt(support.length / n)
    return SignalSpec(n, mu, support)


def _readonly(a):
    a.flags.writeable = False
    return a


def _noise(spec, seed):
    return seed.generator(SUBSTREAM_NOISE).standard_normal(spec.n)


def sample(spec, seed):
    y = _noise(spec, seed)
    if spec.mu != 0:
        y[spec.support.j : spec.support.k] += spec.mu
    return DataVector(_readonly(y), seed)


def sample_batch(spec, seed, replicates):
    """Row r is sample(spec, seed.at(r)).values for r in replicates"""
    replicates = list(replicates)
    out = np.empty((len(replicates), spec.n))
    for row, r in enumerate(replicates):
        out[row] = _noise(spec, seed.at(r))
    if spec.mu != 0:
        out[:, spec.support.j : spec.support.k] += spec.mu
    return out


def cumsum(data):
    values = data.values if isinstance(data, DataVector) else data
    values = np.asarray(values, dtype=float)
    s = np.zeros(values.shape[:-1] + (values.shape[-1] + 1,))
    np.cumsum(values, axis=-1, out=s[..., 1:])
    return CumulativeSums(_readonly(s))


def optimal_norm(n, scale, b=0.0):
    """Smallest norm detectable at the given scale by an optimal test"""
    if not (0 < scale <= 1):
        raise DomainError("scale must lie in (0, 1]")
    return (math.sqrt(2 * math.log(1 / scale)) + b) / math.sqrt(n)


def scan_norm(n):
    """Detection threshold of the scan, which does not depend on the scale"""
    return math.sqrt(2 * math.log(n) / n)


def alr_small_scale_norm(n, scale):
    """Detection threshold of the ALR for signals on small scales"""
    if not (0 < scale <= 1):
        raise DomainError("scale must lie in (0, 1]")
    return math.sqrt(4 * math.log(1 / scale) / n)
