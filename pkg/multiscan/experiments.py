#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""
Power studies and complexity benchmarks.

Two signal grids are supported: a fixed norm with the support length swept
over a list of scales, and a list of norms with the scale drawn uniformly
from (0, 1) in every replicate.  Support lengths are round(scale * n),
clamped to [1, n], and the location is uniform over the feasible starts.
"""

from collections import namedtuple
import csv
import json
import logging
import math
import os
import time

import numpy as np
from joblib import Parallel, delayed
import yaml

from . import schema, settings
from .calibration import blocked_reject, get_critical_values
from .detectors import build_condensed_family, evaluate_condensed
from .event import emit_event
from .interval_stats import reduce_full
from .mod import DETECTOR_NAMES, get_modules, needed_reductions
from .signal_model import (
    STREAM_BENCHMARK,
    STREAM_POWER,
    SUBSTREAM_PLACEMENT,
    DomainError,
    IntervalIndex,
    SeedRecord,
    alr_small_scale_norm,
    cumsum,
    make_signal,
    optimal_norm,
    sample,
    sample_batch,
    scan_norm,
)

logger = logging.getLogger(__name__)

MODES = ("fixed_norm", "random_scale")
NORM_UNITS = ("absolute", "optimal", "scan", "alr_small_scale")

FIXED_NORM_SCALES = (0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5)
RANDOM_SCALE_NORMS = (0.02, 0.025, 0.03, 0.035, 0.04, 0.045, 0.05)

# Published powers at n = 10000, alpha = 0.05, in percent
PUBLISHED_FIXED_NORM_POWER = {
    "scan": (38, 41, 43, 45, 39, 42, 42, 41, 41, 43, 39),
    "alr": (28, 58, 72, 82, 88, 86, 88, 89, 90, 92, 91),
    "condensed_alr": (36, 61, 72, 80, 87, 85, 87, 88, 90, 91, 91),
    "penalized_scan": (37, 61, 72, 80, 85, 84, 85, 86, 87, 90, 89),
    "blocked_scan": (41, 59, 69, 77, 82, 80, 82, 82, 84, 87, 86),
}
PUBLISHED_RANDOM_SCALE_POWER = {
    "scan": (7, 9, 15, 24, 39, 57, 74),
    "alr": (30, 45, 61, 75, 88, 94, 97),
    "condensed_alr": (30, 44, 60, 75, 87, 94, 97),
    "penalized_scan": (26, 40, 57, 74, 85, 93, 97),
    "blocked_scan": (24, 35, 51, 69, 82, 92, 96),
}

PILOT_SCHEMA = schema.ArraySchema(
    "pilot",
    desc="Search for the norm at which one detector reaches a target power",
    members=[
        schema.EnumSchema(
            "detector", "Detector", enums=lambda: DETECTOR_NAMES, default="alr"
        ),
        schema.FloatSchema(
            "scale", "Scale of the matched signal", default=0.5, minimum=0, maximum=1
        ),
        schema.FloatSchema("target", "Target power", default=0.8, minimum=0, maximum=1),
        schema.FloatSchema(
            "low",
            "Lower end of the search, in units of 1/sqrt(n)",
            default=2.0,
            minimum=0,
        ),
        schema.FloatSchema(
            "high",
            "Upper end of the search, in units of 1/sqrt(n)",
            default=6.0,
            minimum=0,
        ),
        schema.IntegerSchema("steps", "Bisection steps", default=10, minimum=1),
        schema.IntegerSchema("b_power", "Power samples", default=1000, minimum=100),
        schema.IntegerSchema("seed", "Seed", default=1, minimum=0),
    ],
)

EXPERIMENT_SCHEMA = schema.ArraySchema(
    "experiment",
    desc="Power study configuration",
    members=[
        schema.IntegerSchema("n", "Sample size", required=True, minimum=3),
        schema.FloatSchema(
            "alpha", "Significance level", default=0.05, minimum=0, maximum=1
        ),
        schema.ListSchema(
            "detectors",
            "Detectors",
            item=schema.EnumSchema("detector", enums=lambda: DETECTOR_NAMES),
            default=DETECTOR_NAMES,
        ),
        schema.EnumSchema(
            "mode", "Signal grid", enums=lambda: MODES, default="fixed_norm"
        ),
        schema.FloatSchema(
            "norm", "Signal norm for the fixed-norm grid", default=0.04, minimum=0
        ),
        schema.ListSchema(
            "scales",
            "Scales",
            item=schema.FloatSchema("scale"),
            default=FIXED_NORM_SCALES,
        ),
        schema.ListSchema(
            "norms",
            "Norms for the random-scale grid",
            item=schema.FloatSchema("norm", minimum=0),
            default=RANDOM_SCALE_NORMS,
        ),
        schema.EnumSchema(
            "norm_unit",
            "Norm unit",
            desc="Norms are multiples of the named detection threshold at the"
            " drawn scale, or absolute",
            enums=lambda: NORM_UNITS,
            default="absolute",
        ),
        schema.BooleanSchema("random_location", "Random location", default=True),
        schema.IntegerSchema(
            "b_crit", "Critical value samples", default=10000, minimum=100
        ),
        schema.IntegerSchema("b_power", "Power samples", default=2000, minimum=100),
        schema.IntegerSchema("seed", "Seed", default=0, minimum=0),
        schema.IntegerSchema(
            "a_offset",
            "Blocked scan offset A",
            default=settings.DEFAULT_A_OFFSET,
            minimum=0,
        ),
        schema.BooleanSchema("long_run", "Allow the O(n^2) ALR at large n"),
        PILOT_SCHEMA,
    ],
)


class ExperimentConfig(
    namedtuple("ExperimentConfig", [m.name for m in EXPERIMENT_SCHEMA.members])
):
    __slots__ = ()

    @classmethod
    def from_dict(cls, data):
        values = EXPERIMENT_SCHEMA.validate(data)
        if not 0 < values["alpha"] < 1:
            raise schema.ConfigError("experiment.alpha: must lie in (0, 1)")
        for i, x in enumerate(values["scales"]):
            if not 0 < x <= 1:
                raise schema.ConfigError(
                    "experiment.scales[%d]: must lie in (0, 1]" % i
                )
        pilot = values["pilot"]
        if not 0 < pilot["scale"] <= 1:
            raise schema.ConfigError("experiment.pilot.scale: must lie in (0, 1]")
        if not pilot["low"] < pilot["high"]:
            raise schema.ConfigError("experiment.pilot: low must be below high")
        return cls(**values)

    def to_dict(self):
        d = self._asdict()
        d["detectors"] = list(self.detectors)
        d["scales"] = list(self.scales)
        d["norms"] = list(self.norms)
        d["pilot"] = dict(self.pilot)
        return d

    def grid(self):
        return list(self.scales if self.mode == "fixed_norm" else self.norms)


def load_config(path, **overrides):
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise schema.ConfigError("%s: %s" % (path, e)) from e
    data.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(data)


def norm_unit(unit, n, scale):
    if unit == "absolute":
        return 1.0
    if unit == "optimal":
        return optimal_norm(n, scale)
    if unit == "scan":
        return scan_norm(n)
    if unit == "alr_small_scale":
        return alr_small_scale_norm(n, scale)
    raise DomainError("unknown norm unit %r" % unit)


def support_length(scale, n):
    return min(n, max(1, int(math.floor(scale * n + 0.5))))


def draw_signal(cfg, grid_value, seed):
    """The alternative of one power replicate"""
    n = cfg.n
    rng = seed.generator(SUBSTREAM_PLACEMENT)
    if cfg.mode == "fixed_norm":
        scale, norm = grid_value, cfg.norm
    else:
        scale, norm = rng.uniform(0.0, 1.0), grid_value
    length = support_length(scale, n)
    if cfg.random_location:
        j = int(rng.integers(0, n - length + 1))
    else:
        j = (n - length) // 2
    norm *= norm_unit(cfg.norm_unit, n, length / n)
    return make_signal(n, norm, IntervalIndex(j, j + length), 1)


class PowerCell(
    namedtuple("PowerCell", ["detector", "grid_value", "rejections", "trials"])
):
    __slots__ = ()

    @property
    def power(self):
        return self.rejections / self.trials

    @property
    def stderr(self):
        p = self.power
        return math.sqrt(p * (1 - p) / self.trials)


class PowerTable:
    def __init__(self, cells, metadata):
        self.cells = list(cells)
        self.metadata = metadata

    def get(self, detector, grid_value):
        for c in self.cells:
            if c.detector == detector and c.grid_value == grid_value:
                return c
        raise KeyError((detector, grid_value))

    def powers(self, detector):
        return [c.power for c in self.cells if c.detector == detector]

    def detectors(self):
        out = []
        for c in self.cells:
            if c.detector not in out:
                out.append(c.detector)
        return out

    def __len__(self):
        return len(self.cells)


def _power_chunk(modules, cfg, grid_index, grid_value, crits, replicates):
    base = SeedRecord(cfg.seed, 0, STREAM_POWER + grid_index)
    y = np.empty((len(replicates), cfg.n))
    for row, r in enumerate(replicates):
        seed = base.at(r)
        y[row] = sample(draw_signal(cfg, grid_value, seed), seed).values
    s = cumsum(y)
    needs = needed_reductions(modules)
    reduction = None
    if needs:
        reduction = reduce_full(
            s, max_abs="max_abs" in needs, log_sum="log_sum" in needs
        )
    counts = []
    for m, crit in zip(modules, crits):
        value = m.evaluate(s, reduction)
        if m.blocked:
            rejected = blocked_reject(value, crit)
        else:
            rejected = crit.reject(value)
        counts.append(int(np.sum(rejected)))
    return counts


def run_power_study(cfg, cache=None, threads=1, chunk=settings.DEFAULT_CHUNK):
    if "alr" in cfg.detectors and cfg.n > settings.LONG_RUN_ALR_N and not cfg.long_run:
        raise DomainError(
            "the full ALR at n=%d needs the long-run flag (O(n^2) calibration)"
            % cfg.n
        )
    modules = get_modules(cfg.detectors) if cfg.detectors else []
    start = time.perf_counter()
    crits = {}
    if modules:
        crits = get_critical_values(
            [m.name for m in modules],
            cfg.n,
            cfg.alpha,
            cfg.b_crit,
            cfg.seed,
            cache=cache,
            threads=threads,
            a_offset=cfg.a_offset,
        )
    calibration_time = time.perf_counter() - start
    crit_list = [crits[m.name] for m in modules]
    chunks = [
        range(i, min(i + chunk, cfg.b_power)) for i in range(0, cfg.b_power, chunk)
    ]
    cells = []
    for g, value in enumerate(cfg.grid()):
        if not modules:
            break
        results = Parallel(n_jobs=threads)(
            delayed(_power_chunk)(modules, cfg, g, value, crit_list, reps)
            for reps in chunks
        )
        totals = np.sum(np.asarray(results, dtype=np.int64), axis=0)
        for m, count in zip(modules, totals):
            cell = PowerCell(m.name, value, int(count), cfg.b_power)
            cells.append(cell)
            emit_event(
                "PowerCellComplete",
                detector=m.name,
                grid_value=value,
                power=cell.power,
                stderr=cell.stderr,
            )
    metadata = {
        "version": settings.VERSION,
        "config": cfg.to_dict(),
        "critical_values": {k: v.to_json() for k, v in crits.items()},
        "runtimes": {
            "calibration": calibration_time,
            "power": time.perf_counter() - start - calibration_time,
        },
    }
    return PowerTable(cells, metadata)


PilotResult = namedtuple("PilotResult", ["norm", "cell", "steps"])


def pilot_norm(cfg, cache=None, threads=1):
    """Bisect the fixed norm until the power of cfg.pilot's detector at its
    scale meets the target.

    Every step is a one-cell power study seeded with the pilot seed, so the
    result depends only on cfg.  steps lists (norm, power) in the order
    tried; cell is the power at the returned norm."""
    p = cfg.pilot
    lo = p["low"] / math.sqrt(cfg.n)
    hi = p["high"] / math.sqrt(cfg.n)
    study = cfg._replace(
        detectors=[p["detector"]],
        mode="fixed_norm",
        scales=[p["scale"]],
        norm_unit="absolute",
        b_power=p["b_power"],
        seed=p["seed"],
    )

    def power_at(norm):
        tbl = run_power_study(study._replace(norm=norm), cache=cache, threads=threads)
        cell = tbl.cells[0]
        emit_event(
            "PilotStep",
            detector=p["detector"],
            norm=norm,
            power=cell.power,
            target=p["target"],
        )
        return cell

    steps = []
    for _ in range(p["steps"]):
        mid = (lo + hi) / 2
        power = power_at(mid).power
        steps.append((mid, power))
        if power < p["target"]:
            lo = mid
        else:
            hi = mid
    norm = (lo + hi) / 2
    cell = power_at(norm)
    logger.info(
        "Pilot: %s power %.3f at norm %.6g (scale %g, target %g)",
        p["detector"],
        cell.power,
        norm,
        p["scale"],
        p["target"],
    )
    return PilotResult(norm, cell, steps)


CSV_FIELDS = (
    "detector",
    "grid_value",
    "power",
    "stderr",
    "n",
    "alpha",
    "B_power",
    "seed",
)


def _rows(tbl):
    cfg = tbl.metadata.get("config", {})
    for c in tbl.cells:
        yield {
            "detector": c.detector,
            "grid_value": c.grid_value,
            "power": c.power,
            "stderr": c.stderr,
            "n": cfg.get("n"),
            "alpha": cfg.get("alpha"),
            "B_power": c.trials,
            "seed": cfg.get("seed"),
        }


def emit_table(tbl, fmt, path):
    if fmt == "csv":
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
            writer.writeheader()
            for row in _rows(tbl):
                writer.writerow(
                    {k: repr(v) if isinstance(v, float) else v for k, v in row.items()}
                )
    elif fmt == "json":
        # Runtimes are logged, not written, so equal configs give equal files
        metadata = {k: v for k, v in tbl.metadata.items() if k != "runtimes"}
        with open(path, "w", encoding="utf-8") as f:
            json.dump({"metadata": metadata, "rows": list(_rows(tbl))}, f, indent=2)
    else:
        raise DomainError("unknown table format %r" % fmt)
    return path


def read_table(path, fmt=None):
    fmt = fmt or os.path.splitext(path)[1].lstrip(".")
    metadata = {}
    if fmt == "csv":
        with open(path, "r", newline="", encoding="utf-8") as f:
            rows = list(csv.DictReader(f))
        rows = [
            {
                "detector": r["detector"],
                "grid_value": float(r["grid_value"]),
                "power": float(r["power"]),
                "B_power": int(r["B_power"]),
                "n": int(r["n"]),
                "alpha": float(r["alpha"]),
                "seed": int(r["seed"]),
            }
            for r in rows
        ]
        if rows:
            metadata["config"] = {k: rows[0][k] for k in ("n", "alpha", "seed")}
    elif fmt == "json":
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
        rows, metadata = data["rows"], data["metadata"]
    else:
        raise DomainError("unknown table format %r" % fmt)
    cells = [
        PowerCell(
            r["detector"],
            r["grid_value"],
            int(round(r["power"] * r["B_power"])),
            r["B_power"],
        )
        for r in rows
    ]
    return PowerTable(cells, metadata)


class BenchmarkReport:
    def __init__(self, rows):
        self.rows = rows

    def growth(self):
        """Ratios between consecutive sample sizes, measured and predicted"""
        out = []
        for a, b in zip(self.rows, self.rows[1:]):
            out.append(
                {
                    "from_n": a["n"],
                    "to_n": b["n"],
                    "condensed_time_ratio": b["condensed_time"] / a["condensed_time"],
                    "nlog2n_ratio": b["nlog2n"] / a["nlog2n"],
                    "n2_ratio": (b["n"] / a["n"]) ** 2,
                }
            )
        return out

    def to_json(self):
        return {
            "version": settings.VERSION,
            "rows": self.rows,
            "growth": self.growth(),
        }


def _best_time(func, repeats):
    best = math.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = func()
        best = min(best, time.perf_counter() - start)
    return best, result


def benchmark_complexity(ns, repeats=3, alr_limit=20000, seed=0):
    ns = list(ns)
    if ns != sorted(ns):
        raise DomainError("benchmark sample sizes must be ascending")
    rows = []
    for n in ns:
        null = make_signal(n, 0.0, IntervalIndex(0, n))
        s = cumsum(sample_batch(null, SeedRecord(seed, 0, STREAM_BENCHMARK), [0])[0])
        fam = build_condensed_family(n)
        condensed_time, (_, evaluations) = _best_time(
            lambda: evaluate_condensed(s, fam), repeats
        )
        nlog2n = n * math.log(n) ** 2
        alr_time = None
        if n <= alr_limit:
            alr_time, _ = _best_time(
                lambda: reduce_full(s, max_abs=False, log_sum=True), repeats
            )
        rows.append(
            {
                "n": n,
                "cardinality": fam.total_cardinality,
                "evaluations": evaluations,
                "nlog2n": nlog2n,
                "count_ratio": fam.total_cardinality / nlog2n,
                "condensed_time": condensed_time,
                "alr_time": alr_time,
                "alr_time_per_n2": None if alr_time is None else alr_time / n**2,
            }
        )
        emit_event(
            "BenchmarkPoint",
            n=n,
            condensed_time=condensed_time,
            evaluations=evaluations,
            alr_time=alr_time,
        )
    return BenchmarkReport(rows)
