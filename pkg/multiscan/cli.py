#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

"""
Command line front end.

Exit codes: 2 for usage and domain errors, 1 for I/O errors, 0 otherwise.
"detect" exits 0 whatever it decides; the decision is in its output.
"""

import argparse
import json
import logging
import sys

import numpy as np
from scipy.stats import median_abs_deviation

from . import settings
from .calibration import (
    CalibrationCache,
    blocked_excess,
    blocked_reject,
    get_critical_values,
    null_rejection_rate,
)
from .detectors import build_condensed_family
from .event import register_handler, unregister_handler
from .experiments import (
    ExperimentConfig,
    benchmark_complexity,
    emit_table,
    load_config,
    pilot_norm,
    run_power_study,
)
from .interval_stats import locate
from .mod import DETECTOR_NAMES, get_modules
from .schema import ConfigError
from .signal_model import DomainError, cumsum

logger = logging.getLogger("multiscan.cli")


def _log_event(event, **params):
    logger.info("%s %s", event, " ".join("%s=%s" % kv for kv in sorted(params.items())))


def _write_json(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text + "\n")
    else:
        print(text)


def _detectors(args):
    return args.detector or list(DETECTOR_NAMES)


def _check_long_run(args, detectors):
    if "alr" in detectors and args.n > settings.LONG_RUN_ALR_N and not args.long_run:
        raise DomainError(
            "the full ALR at n=%d is O(n^2) per replicate; pass --long-run" % args.n
        )


def _parameters(args, *names):
    return {k: getattr(args, k) for k in names if hasattr(args, k)}


def cmd_calibrate(args):
    detectors = _detectors(args)
    _check_long_run(args, detectors)
    cache = CalibrationCache(args.cache_dir)
    crits = get_critical_values(
        detectors,
        args.n,
        args.alpha,
        args.mc_crit,
        args.seed,
        cache=cache,
        threads=args.threads,
        a_offset=args.a_offset,
    )
    out = {
        "version": settings.VERSION,
        "parameters": _parameters(
            args, "n", "alpha", "mc_crit", "seed", "a_offset", "detector"
        ),
        "calibrations": [c.to_json() for c in crits.values()],
    }
    if args.validate:
        out["validation"] = {
            "mc_samples": args.validate,
            "rejection_rate": {
                name: null_rejection_rate(
                    name, crit, args.n, args.validate, args.seed, args.threads
                )
                for name, crit in crits.items()
            },
        }
    _write_json(out, args.out)
    return 0


def read_series(path):
    values = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise DomainError("%s:%d: not a number: %r" % (path, lineno, line))
    return np.asarray(values)


def standardize(y):
    """Center by the mean and scale by the normal-consistent MAD"""
    scale = median_abs_deviation(y, scale="normal")
    if not scale > 0:
        raise DomainError("cannot standardize a series with zero spread")
    return (y - np.mean(y)) / scale


def cmd_detect(args):
    y = read_series(args.file)
    if args.standardize:
        y = standardize(y)
    n = len(y)
    if n < 3:
        raise DomainError("need at least 3 observations, got %d" % n)
    args.n = n
    detectors = _detectors(args)
    _check_long_run(args, detectors)
    s = cumsum(y)
    crits = get_critical_values(
        detectors,
        n,
        args.alpha,
        args.mc_crit,
        args.seed,
        cache=CalibrationCache(args.cache_dir),
        threads=args.threads,
        a_offset=args.a_offset,
    )
    print(
        "# multiscan %s detect n=%d alpha=%g mc_crit=%d seed=%d a_offset=%d "
        "standardize=%s"
        % (
            settings.VERSION,
            n,
            args.alpha,
            args.mc_crit,
            args.seed,
            args.a_offset,
            args.standardize,
        )
    )
    where = locate(s)
    print("# scan maximum at (%d, %d]" % (where.j, where.k))
    for m in get_modules(detectors):
        crit = crits[m.name]
        value = m.evaluate(s)
        if m.blocked:
            statistic, critical = blocked_excess(value, crit), 0.0
            rejected = blocked_reject(value, crit)
        else:
            statistic, critical = value, crit.value
            rejected = bool(crit.reject(value))
        print(
            "%s\t%.10g\t%.10g\t%s"
            % (m.name, statistic, critical, "reject" if rejected else "accept")
        )
    return 0


def cmd_power_table(args):
    overrides = {
        "n": args.n,
        "alpha": args.alpha,
        "detectors": args.detector,
        "seed": args.seed,
        "b_crit": args.mc_crit,
        "b_power": args.mc_power,
        "a_offset": args.a_offset,
        "long_run": True if args.long_run else None,
    }
    if args.config:
        cfg = load_config(args.config, **overrides)
    else:
        cfg = ExperimentConfig.from_dict(
            {k: v for k, v in overrides.items() if v is not None}
        )
    tbl = run_power_study(
        cfg, cache=CalibrationCache(args.cache_dir), threads=args.threads
    )
    emit_table(tbl, args.format, args.out)
    logger.info("Wrote %d rows to %s", len(tbl), args.out)
    return 0


def cmd_pilot(args):
    cfg = load_config(
        args.config, long_run=True if args.long_run else None, b_crit=args.mc_crit
    )
    cache = CalibrationCache(args.cache_dir)
    result = pilot_norm(cfg, cache=cache, threads=args.threads)
    _write_json(
        {
            "version": settings.VERSION,
            "config": cfg.to_dict(),
            "norm": result.norm,
            "power": result.cell.power,
            "stderr": result.cell.stderr,
            "steps": [{"norm": x, "power": y} for x, y in result.steps],
        },
        args.out,
    )
    return 0


def cmd_inspect_family(args):
    report = build_condensed_family(args.n).to_report()
    report["version"] = settings.VERSION
    _write_json(report, args.out)
    return 0


def cmd_bench(args):
    ns = sorted(args.n or [1000, 10000, 100000])
    report = benchmark_complexity(
        ns, repeats=args.repeats, alr_limit=args.alr_limit, seed=args.seed
    )
    out = report.to_json()
    out["parameters"] = _parameters(args, "n", "repeats", "alr_limit", "seed")
    _write_json(out, args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="multiscan-cli",
        description="Multiscale detection of a signal with unknown location and extent",
    )
    parser.add_argument(
        "--version", action="version", version="%(prog)s " + settings.VERSION
    )

    # Runtime flags are accepted before or after the subcommand
    def runtime_flags(p, default):
        p.add_argument(
            "--debug",
            "-d",
            action="store_true",
            default=default(False),
            help="Enable debug output",
        )
        p.add_argument(
            "--cache-dir",
            default=default(None),
            help="Calibration cache directory (default: $MULTISCAN_CACHE_DIR)",
        )
        p.add_argument(
            "--threads",
            type=int,
            default=default(1),
            help="Worker processes; results do not depend on it",
        )

    runtime_flags(parser, lambda x: x)
    runtime = argparse.ArgumentParser(add_help=False)
    runtime_flags(runtime, lambda x: argparse.SUPPRESS)

    # Parents share Action objects with their children, so each default set
    # gets its own parent
    def test_flags(default):
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument(
            "--alpha", type=float, default=default(0.05), help="Significance level"
        )
        p.add_argument(
            "--detector",
            action="append",
            choices=DETECTOR_NAMES,
            help="Detector to use, may be repeated (default: all)",
        )
        p.add_argument("--seed", type=int, default=default(0), help="Random seed")
        p.add_argument(
            "--mc-crit",
            type=int,
            default=default(10000),
            help="Monte Carlo samples for critical values",
        )
        p.add_argument(
            "--a-offset",
            type=int,
            default=default(settings.DEFAULT_A_OFFSET),
            help="Offset A of the blocked scan's per-block levels",
        )
        p.add_argument(
            "--long-run",
            action="store_true",
            help="Allow the O(n^2) ALR calibration at large n",
        )
        return p

    test = test_flags(lambda x: x)
    # Unset flags fall back to the config file
    study = test_flags(lambda x: None)

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser(
        "calibrate", parents=[runtime, test], help="Simulate null critical values"
    )
    p.add_argument("--n", type=int, required=True, help="Sample size")
    p.add_argument("--out", help="Output JSON file (default: stdout)")
    p.add_argument(
        "--validate",
        type=int,
        metavar="B",
        default=0,
        help="Also report null rejection rates on B fresh replicates",
    )
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser(
        "detect", parents=[runtime, test], help="Test a data series for a signal"
    )
    p.add_argument("file", help="Newline-delimited numeric series")
    p.add_argument(
        "--standardize",
        action="store_true",
        help="Subtract the mean and divide by the MAD; outside the Gaussian model",
    )
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser(
        "power-table", parents=[runtime, study], help="Run a Monte Carlo power study"
    )
    p.add_argument("--config", help="YAML experiment config")
    p.add_argument("--n", type=int, help="Sample size (overrides the config)")
    p.add_argument("--mc-power", type=int, help="Monte Carlo samples for power")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", required=True, help="Output file")
    p.set_defaults(func=cmd_power_table)

    p = sub.add_parser(
        "pilot",
        parents=[runtime],
        help="Find the norm at which a detector reaches a target power",
    )
    p.add_argument("--config", required=True, help="YAML experiment config")
    p.add_argument(
        "--mc-crit", type=int, help="Monte Carlo samples for critical values"
    )
    p.add_argument(
        "--long-run",
        action="store_true",
        help="Allow the O(n^2) ALR calibration at large n",
    )
    p.add_argument("--out", help="Output JSON file (default: stdout)")
    p.set_defaults(func=cmd_pilot)

    p = sub.add_parser(
        "inspect-family", parents=[runtime], help="Describe the condensed family"
    )
    p.add_argument("--n", type=int, required=True, help="Sample size")
    p.add_argument("--out", help="Output JSON file (default: stdout)")
    p.set_defaults(func=cmd_inspect_family)

    p = sub.add_parser("bench", parents=[runtime], help="Time the condensed ALR")
    p.add_argument(
        "--n", type=int, action="append", help="Sample size, may be repeated"
    )
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument(
        "--alr-limit",
        type=int,
        default=20000,
        help="Largest n at which the full ALR is timed too",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="Output JSON file (default: stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    settings.configure_logging(args.debug)
    register_handler(None, _log_event)
    try:
        return args.func(args)
    except (DomainError, ConfigError) as e:
        logger.error("%s", e)
        return 2
    except OSError as e:
        logger.error("%s", e)
        return 1
    finally:
        unregister_handler(None, _log_event)


def main():
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
