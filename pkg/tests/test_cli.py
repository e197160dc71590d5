#!/usr/bin/env python3
#
# Copyright 2026 The multiscan authors
#
# This work is licensed under the MIT License.  Please see the LICENSE file or
# http://opensource.org/licenses/MIT.

import json
import os

import numpy as np

from multiscan import settings
from multiscan.cli import build_parser
from multiscan.experiments import read_table
from multiscan.mod import DETECTOR_NAMES

from .multiscantest import MultiscanTestCase, main


class CliTest(MultiscanTestCase):
    def test_no_command(self):
        r, a, b = self.cli([])
        self.assertEqual(r, 2)

    def test_bad_detector(self):
        path = self.write_series([0.0] * 10)
        r, a, b = self.cli(["detect", "--detector", "nope", path])
        self.assertEqual(r, 2)

    def test_version(self):
        a, b = self.check_cli(["--version"])
        self.assertIn("multiscan-cli", a + b)

    def test_subcommand_defaults(self):
        parser = build_parser()
        for argv in (["calibrate", "--n", "30"], ["detect", "data.txt"]):
            args = parser.parse_args(argv)
            self.assertEqual(args.alpha, 0.05)
            self.assertEqual(args.seed, 0)
            self.assertEqual(args.mc_crit, 10000)
            self.assertEqual(args.a_offset, settings.DEFAULT_A_OFFSET)
        args = parser.parse_args(["power-table", "--out", "x.csv"])
        self.assertIsNone(args.alpha)
        self.assertIsNone(args.seed)
        self.assertIsNone(args.mc_crit)
        self.assertIsNone(args.a_offset)

    def test_calibrate_defaults(self):
        a, b = self.check_cli(
            ["calibrate", "--n", "30", "--mc-crit", "100", "--detector", "scan"]
        )
        data = json.loads(a)
        self.assertEqual(data["parameters"]["seed"], 0)
        self.assertEqual(data["parameters"]["alpha"], 0.05)
        self.assertEqual(data["calibrations"][0]["detector"], "scan")

    def test_inspect_family(self):
        a, b = self.check_cli(["inspect-family", "--n", "16"])
        report = json.loads(a)
        self.assertEqual(report["total"], 59)
        self.assertEqual([x["count"] for x in report["blocks"]], [10, 11, 7])
        self.assertEqual(report["small"]["count"], 31)

    def test_inspect_family_too_small(self):
        self.check_cli(["inspect-family", "--n", "2"], rc=2)

    def test_detect_zeros(self):
        path = self.write_series([0.0] * 50)
        a, b = self.check_cli(["detect", "--mc-crit", "200", path])
        lines = a.splitlines()
        self.assertTrue(lines[0].startswith("# multiscan "))
        self.assertIn("n=50", lines[0])
        self.assertTrue(lines[1].startswith("# scan maximum at"))
        results = [line.split("\t") for line in lines[2:]]
        self.assertEqual([x[0] for x in results], list(DETECTOR_NAMES))
        for name, statistic, critical, decision in results:
            float(statistic)
            float(critical)
            self.assertEqual(decision, "accept", name)
        self.assertEqual(float(results[0][1]), 0.0)

    def test_detect_signal(self):
        rng = np.random.default_rng(0)
        y = rng.standard_normal(200)
        y[80:120] += 2.0
        path = self.write_series(y.tolist())
        a, b = self.check_cli(
            [
                "detect",
                "--mc-crit",
                "200",
                "--detector",
                "scan",
                "--detector",
                "condensed_alr",
                path,
            ]
        )
        lines = a.splitlines()
        self.assertEqual(len(lines), 4)
        for line in lines[2:]:
            self.assertEqual(line.split("\t")[3], "reject")

    def test_detect_cached(self):
        # The second run finds its critical values in the cache
        path = self.write_series([0.0] * 30)
        cache = os.path.join(self.get_tmpdir(), "detect-cache")
        argv = ["--cache-dir", cache, "detect", "--mc-crit", "100", "-d", path]
        argv += ["--detector", "scan"]
        first, _ = self.check_cli(argv)
        self.assertEqual(len(os.listdir(cache)), 1)
        second, _ = self.check_cli(argv)
        self.assertEqual(first, second)

    def test_detect_errors(self):
        self.check_cli(["detect", os.path.join(self.get_tmpdir(), "missing.txt")], rc=1)
        path = self.write_file("bad.txt", "1.0\nabc\n")
        self.check_cli(["detect", "--mc-crit", "100", path], rc=2)
        path = self.write_series([1.0] * 10, name="flat.txt")
        self.check_cli(["detect", "--standardize", "--mc-crit", "100", path], rc=2)
        path = self.write_series([1.0, 2.0], name="short.txt")
        self.check_cli(["detect", "--mc-crit", "100", path], rc=2)

    def test_calibrate(self):
        out = os.path.join(self.get_tmpdir(), "crit.json")
        self.check_cli(
            [
                "calibrate", "--n", "30", "--mc-crit", "200", "--detector", "scan",
                "--detector", "blocked_scan", "--validate", "200", "--out", out,
            ]
        )
        with open(out) as f:
            data = json.load(f)
        names = [c["detector"] for c in data["calibrations"]]
        self.assertEqual(names, ["scan", "blocked_scan"])
        self.assertEqual(data["calibrations"][1]["kind"], "blocked")
        rates = data["validation"]["rejection_rate"]
        self.assertEqual(sorted(rates), ["blocked_scan", "scan"])
        for rate in rates.values():
            self.assertTrue(0 <= rate <= 1)

    def test_calibrate_long_run(self):
        self.check_cli(["calibrate", "--n", "3000", "--detector", "alr"], rc=2)

    def test_power_table(self):
        config = self.write_file(
            "small.yaml",
            "n: 40\ndetectors: [scan, penalized_scan]\nscales: [0.1, 0.5]\n"
            "norm: 0.5\nb_crit: 200\nb_power: 100\nseed: 9\n",
        )
        outs = []
        for name in ["a.csv", "b.csv"]:
            out = os.path.join(self.get_tmpdir(), name)
            self.check_cli(["power-table", "--config", config, "--out", out])
            with open(out) as f:
                outs.append(f.read())
        self.assertEqual(outs[0], outs[1])
        tbl = read_table(os.path.join(self.get_tmpdir(), "a.csv"))
        self.assertEqual(len(tbl), 4)
        self.assertEqual(tbl.metadata["config"]["seed"], 9)

    def test_power_table_overrides(self):
        out = os.path.join(self.get_tmpdir(), "o.json")
        self.check_cli(
            [
                "power-table", "--n", "30", "--detector", "scan", "--mc-crit", "100",
                "--mc-power", "100", "--format", "json", "--out", out,
            ]
        )
        with open(out) as f:
            data = json.load(f)
        self.assertEqual(data["metadata"]["config"]["n"], 30)
        self.assertNotIn("runtimes", data["metadata"])
        self.assertEqual(len(data["rows"]), 11)

    def test_power_table_bad_config(self):
        config = self.write_file("bad.yaml", "n: 40\nunknown_key: 1\n")
        out = os.path.join(self.get_tmpdir(), "bad.csv")
        self.check_cli(["power-table", "--config", config, "--out", out], rc=2)

    def test_pilot(self):
        config = self.write_file(
            "pilot.yaml",
            "n: 40\nb_crit: 200\nseed: 4\n"
            "pilot: {detector: scan, target: 0.5, steps: 3, b_power: 100}\n",
        )
        a, b = self.check_cli(["pilot", "--config", config])
        data = json.loads(a)
        self.assertEqual(len(data["steps"]), 3)
        self.assertGreater(data["norm"], 0)
        self.assertTrue(0 <= data["power"] <= 1)
        self.assertEqual(data["config"]["pilot"]["detector"], "scan")
        config = self.write_file("bad-pilot.yaml", "n: 40\npilot: {low: 5, high: 1}\n")
        self.check_cli(["pilot", "--config", config], rc=2)

    def test_bench(self):
        a, b = self.check_cli(["bench", "--n", "100", "--n", "50", "--repeats", "1"])
        report = json.loads(a)
        self.assertEqual([r["n"] for r in report["rows"]], [50, 100])


if __name__ == "__main__":
    main()
