#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""
Monte Carlo critical values.

Null replicates are keyed by (seed, stream, replicate), so the simulated
sample does not depend on how replicates are split across workers.  The
quantile rule is the ceil((1 - alpha)(B + 1))-th order statistic, and a
statistic rejects when it is strictly larger than its critical value.
"""

from collections import namedtuple
import hashlib
import json
import logging
import math
import os
import time

import numpy as np
from joblib import Parallel, delayed

from . import settings
from .detectors import BlockMaxima
from .event import emit_event
from .interval_stats import reduce_full
from .mod import needed_reductions, resolve
from .signal_model import (
    STREAM_CALIBRATION,
    STREAM_VALIDATION,
    DomainError,
    IntervalIndex,
    SeedRecord,
    cumsum,
    make_signal,
    sample_batch,
)

logger = logging.getLogger(__name__)

CACHE_FORMAT = 1


def _seed_record(seed, stream):
    if isinstance(seed, SeedRecord):
        return seed.with_stream(stream)
    return SeedRecord(seed, 0, stream)


def _order_index(level, size):
    # The small slack keeps e.g. 0.95 * 20 from rounding up to 20
    return math.ceil((1 - level) * (size + 1) - 1e-9)


def order_statistic_quantile(sample, level):
    """The ceil((1 - level)(B + 1))-th smallest value, index clamped to [1, B].

    Level 0 means "never reject" and yields +inf."""
    sample = np.sort(np.asarray(sample, dtype=float))
    return _sorted_quantile(sample, level)


def _sorted_quantile(sorted_sample, level):
    if level <= 0:
        return math.inf
    size = len(sorted_sample)
    idx = _order_index(level, size)
    if idx > size:
        logger.warning(
            "%d Monte Carlo samples are too few for level %g; using the sample maximum",
            size,
            level,
        )
    idx = min(max(idx, 1), size)
    return float(sorted_sample[idx - 1])


def _float_or_none(x):
    return None if not math.isfinite(x) else float(x)


def _none_to_inf(x):
    return math.inf if x is None else float(x)


class CriticalValues(
    namedtuple(
        "CriticalValues", ["detector", "n", "alpha", "value", "mc_samples", "seed"]
    )
):
    __slots__ = ()
    kind = "critical"

    def reject(self, statistic):
        return np.asarray(statistic) > self.value

    def cache_params(self):
        return critical_params(
            self.detector, self.n, self.alpha, self.mc_samples, self.seed
        )

    def to_json(self):
        return {
            "kind": self.kind,
            "detector": self.detector,
            "n": self.n,
            "alpha": self.alpha,
            "value": _float_or_none(self.value),
            "mc_samples": self.mc_samples,
            "seed": self.seed.to_json(),
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            data["detector"],
            data["n"],
            data["alpha"],
            _none_to_inf(data["value"]),
            data["mc_samples"],
            SeedRecord.from_json(data["seed"]),
        )


class BlockedCalibration(
    namedtuple(
        "BlockedCalibration",
        [
            "n",
            "alpha",
            "a_offset",
            "alpha_tilde",
            "q",
            "mc_samples",
            "seed",
            "level",
            "reachable",
        ],
    )
):
    """Per-block critical values q_l at levels alpha_tilde / (a_offset + l)^2.

    level is the joint rejection rate on the calibration sample itself;
    reachable is False when alpha could not be attained on it."""

    __slots__ = ()
    kind = "blocked"
    detector = "blocked_scan"

    @property
    def value(self):
        return list(self.q)

    def reject(self, bm):
        return blocked_reject(bm, self)

    def cache_params(self):
        return blocked_params(
            self.n, self.alpha, self.a_offset, self.mc_samples, self.seed
        )

    def to_json(self):
        return {
            "kind": self.kind,
            "detector": self.detector,
            "n": self.n,
            "alpha": self.alpha,
            "a_offset": self.a_offset,
            "alpha_tilde": self.alpha_tilde,
            "q": [_float_or_none(x) for x in self.q],
            "mc_samples": self.mc_samples,
            "seed": self.seed.to_json(),
            "level": self.level,
            "reachable": self.reachable,
        }

    @classmethod
    def from_json(cls, data):
        return cls(
            data["n"],
            data["alpha"],
            data["a_offset"],
            data["alpha_tilde"],
            tuple(_none_to_inf(x) for x in data["q"]),
            data["mc_samples"],
            SeedRecord.from_json(data["seed"]),
            data["level"],
            data["reachable"],
        )


def calibration_from_json(data):
    if data.get("kind") == BlockedCalibration.kind:
        return BlockedCalibration.from_json(data)
    return CriticalValues.from_json(data)


def _simulate_chunk(modules, n, base, replicates):
    null = make_signal(n, 0.0, IntervalIndex(0, n))
    s = cumsum(sample_batch(null, base, replicates))
    needs = needed_reductions(modules)
    reduction = None
    if needs:
        reduction = reduce_full(
            s, max_abs="max_abs" in needs, log_sum="log_sum" in needs
        )
    out = []
    for m in modules:
        value = m.evaluate(s, reduction)
        if isinstance(value, BlockMaxima):
            value = value.values
        out.append(np.asarray(value, dtype=float))
    return out


def _chunks(count, size):
    return [range(i, min(i + size, count)) for i in range(0, count, size)]


def simulate_null(
    detectors,
    n,
    mc_samples,
    seed,
    threads=1,
    stream=STREAM_CALIBRATION,
    chunk=settings.DEFAULT_CHUNK,
):
    """Null statistics of several detectors from one shared set of replicates.

    Returns one array per detector, in order: shape (B,) for scalar
    statistics and (B, ell_max + 1) for block maxima."""
    modules = [resolve(d) for d in detectors]
    base = _seed_record(seed, stream)
    start = time.perf_counter()
    results = Parallel(n_jobs=threads)(
        delayed(_simulate_chunk)(modules, n, base, reps)
        for reps in _chunks(mc_samples, chunk)
    )
    merged = [np.concatenate([r[i] for r in results]) for i in range(len(modules))]
    emit_event(
        "NullSimulationComplete",
        detectors=[m.name for m in modules],
        n=n,
        mc_samples=mc_samples,
        elapsed=time.perf_counter() - start,
    )
    return merged


def _check_level(alpha, allow_zero=False):
    if not ((0 <= alpha if allow_zero else 0 < alpha) and alpha < 1):
        raise DomainError("alpha must lie in (0, 1), got %r" % alpha)


def critical_from_sample(detector, n, alpha, sample, seed):
    module = resolve(detector)
    sample = np.asarray(sample, dtype=float)
    return CriticalValues(
        module.name or module.__class__.__name__,
        n,
        alpha,
        order_statistic_quantile(sample, alpha),
        len(sample),
        _seed_record(seed, STREAM_CALIBRATION),
    )


def null_quantile(detector, n, alpha, mc_samples, seed, threads=1):
    module = resolve(detector)
    if module.blocked:
        raise DomainError("the blocked scan is calibrated with calibrate_blocked")
    if mc_samples < 20:
        raise DomainError("at least 20 Monte Carlo samples are needed")
    _check_level(alpha)
    (sample,) = simulate_null([module], n, mc_samples, seed, threads)
    return critical_from_sample(module, n, alpha, sample, seed)


def _block_thresholds(sorted_maxima, nonempty, at, a_offset):
    q = np.full(sorted_maxima.shape[1], math.inf)
    for col in np.flatnonzero(nonempty):
        ell = col + 1
        level = min(at / (a_offset + ell) ** 2, 1.0)
        q[col] = _sorted_quantile(sorted_maxima[:, col], level)
    return q


def _joint_level(maxima, q):
    return float(np.mean(np.any(maxima > q, axis=1)))


def fit_blocked(maxima, n, alpha, a_offset=settings.DEFAULT_A_OFFSET, seed=0):
    """Bisect alpha_tilde on a stored (B, ell_max + 1) matrix of null block
    maxima so that the joint level is alpha, ending on the side <= alpha."""
    _check_level(alpha, allow_zero=True)
    maxima = np.asarray(maxima, dtype=float)
    mc_samples, blocks = maxima.shape
    seed = _seed_record(seed, STREAM_CALIBRATION)
    nonempty = np.isfinite(maxima).any(axis=0)
    sorted_maxima = np.sort(maxima, axis=0)

    def level_at(at):
        return _joint_level(
            maxima, _block_thresholds(sorted_maxima, nonempty, at, a_offset)
        )

    reachable = True
    if alpha == 0:
        at = 0.0
    else:
        # At (A + 1)^2 the first block alone already rejects almost always
        lo, hi = 0.0, float((a_offset + 1) ** 2)
        lo_level, hi_level = 0.0, level_at(hi)
        if hi_level < alpha:
            logger.warning(
                "joint level %g is not reachable on this sample (max %g)",
                alpha,
                hi_level,
            )
            reachable = False
            lo, lo_level = hi, hi_level
        else:
            while hi_level - lo_level > 1.0 / mc_samples + 1e-12:
                mid = 0.5 * (lo + hi)
                if not lo < mid < hi:
                    break
                mid_level = level_at(mid)
                if mid_level <= alpha:
                    lo, lo_level = mid, mid_level
                else:
                    hi, hi_level = mid, mid_level
        at = lo
    q = _block_thresholds(sorted_maxima, nonempty, at, a_offset)
    return BlockedCalibration(
        n,
        alpha,
        a_offset,
        at,
        tuple(float(x) for x in q),
        mc_samples,
        seed,
        _joint_level(maxima, q),
        reachable,
    )


def calibrate_blocked(
    n, alpha, a_offset=settings.DEFAULT_A_OFFSET, mc_samples=10000, seed=0, threads=1
):
    _check_level(alpha, allow_zero=True)
    if mc_samples < 1000:
        logger.warning(
            "%d samples are few for the blocked scan's smallest levels", mc_samples
        )
    (maxima,) = simulate_null(["blocked_scan"], n, mc_samples, seed, threads)
    return fit_blocked(maxima, n, alpha, a_offset, seed)


def blocked_reject(bm, cal):
    if bm.n != cal.n:
        raise DomainError(
            "block maxima for n=%d checked against calibration for n=%d"
            % (bm.n, cal.n)
        )
    exceed = np.asarray(bm.values) > np.asarray(cal.q)
    result = np.any(exceed, axis=-1)
    return bool(result) if result.ndim == 0 else result


def blocked_excess(bm, cal):
    """max_l (M_{n,l} - q_l) over blocks with a finite critical value"""
    values = np.asarray(bm.values, dtype=float)
    q = np.asarray(cal.q)
    finite = np.isfinite(q) & np.isfinite(values)
    if not finite.any():
        return -math.inf
    return float(np.max((values - q)[finite]))


def null_rejection_rate(detector, crit, n, mc_samples, seed, threads=1):
    """Rejection rate on fresh null replicates, drawn from a stream disjoint
    from the calibration stream"""
    module = resolve(detector)
    (sample,) = simulate_null(
        [module], n, mc_samples, seed, threads, stream=STREAM_VALIDATION
    )
    if module.blocked:
        rejected = blocked_reject(BlockMaxima(n, sample), crit)
    else:
        rejected = crit.reject(sample)
    return float(np.mean(rejected))


def critical_params(detector, n, alpha, mc_samples, seed):
    return {
        "format": CACHE_FORMAT,
        "kind": CriticalValues.kind,
        "detector": detector,
        "n": n,
        "alpha": alpha,
        "mc_samples": mc_samples,
        "seed": _seed_record(seed, STREAM_CALIBRATION).seed,
    }


def blocked_params(n, alpha, a_offset, mc_samples, seed):
    return {
        "format": CACHE_FORMAT,
        "kind": BlockedCalibration.kind,
        "detector": BlockedCalibration.detector,
        "n": n,
        "alpha": alpha,
        "a_offset": a_offset,
        "mc_samples": mc_samples,
        "seed": _seed_record(seed, STREAM_CALIBRATION).seed,
    }


class CalibrationCache:
    """Calibration results on disk, one JSON file per full parameter tuple"""

    def __init__(self, directory=None):
        self.directory = directory or settings.CACHE_DIR

    def path(self, params):
        digest = hashlib.sha1(
            json.dumps(params, sort_keys=True).encode("utf-8")
        ).hexdigest()
        return os.path.join(
            self.directory,
            "%s-n%d-%s.json" % (params["detector"], params["n"], digest[:16]),
        )

    def load(self, params):
        path = self.path(params)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
            obj = calibration_from_json(data)
        except (ValueError, KeyError, TypeError):
            logger.exception("Ignoring corrupt calibration cache entry %s", path)
            return None
        if obj.cache_params() != params:
            logger.warning("Calibration cache entry %s does not match, ignoring", path)
            return None
        return obj

    def store(self, obj):
        os.makedirs(self.directory, exist_ok=True)
        path = self.path(obj.cache_params())
        tmp = path + ".tmp"
        with open(tmp, "w", encoding="utf-8") as f:
            json.dump(obj.to_json(), f, indent=2, sort_keys=True)
        os.replace(tmp, path)
        return path


def get_critical_values(
    detectors,
    n,
    alpha,
    mc_samples,
    seed,
    cache=None,
    threads=1,
    a_offset=settings.DEFAULT_A_OFFSET,
):
    """Critical values for each detector, from the cache where possible.

    Missing detectors are simulated together, sharing one full-family pass per
    replicate.  Returns a dict keyed by detector name."""
    modules = [resolve(d) for d in detectors]
    found, missing = {}, []
    for m in modules:
        if m.blocked:
            params = blocked_params(n, alpha, a_offset, mc_samples, seed)
        else:
            params = critical_params(m.name, n, alpha, mc_samples, seed)
        obj = cache.load(params) if cache else None
        if obj is None:
            missing.append(m)
        else:
            found[m.name] = obj
            emit_event(
                "CriticalValuesReady",
                detector=m.name,
                n=n,
                alpha=alpha,
                value=obj.value,
                cached=True,
            )
    if missing:
        if mc_samples < 20:
            raise DomainError("at least 20 Monte Carlo samples are needed")
        _check_level(alpha)
        samples = simulate_null(missing, n, mc_samples, seed, threads)
        for m, sample in zip(missing, samples):
            if m.blocked:
                obj = fit_blocked(sample, n, alpha, a_offset, seed)
            else:
                obj = critical_from_sample(m, n, alpha, sample, seed)
            if cache:
                cache.store(obj)
            found[m.name] = obj
            emit_event(
                "CriticalValuesReady",
                detector=m.name,
                n=n,
                alpha=alpha,
                value=obj.value,
                cached=False,
            )
    return {m.name: found[m.name] for m in modules}
