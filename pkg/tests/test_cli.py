# -*- coding: utf-8 -*-
# Copyright (c) 2026  The cqrel developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

import json
import math
import unittest

import numpy as np
from click.testing import CliRunner

from cqrel.cli import cli, format_number, parse_grid
from cqrel.errors import ValidationError

from utils import TempDirTest, binary_vectors, gram_document, states_document


class CliTest(TempDirTest):
    """
    Commands are given as one string; "{name}" placeholders are replaced
    by the paths of files in self.files.
    """

    def setUp(self):
        super(CliTest, self).setUp()
        self.runner = CliRunner()
        self.files = {
            "binary": self.write_json(
                "binary.json", states_document(binary_vectors(0.5))
            ),
            "orthogonal": self.write_json(
                "orthogonal.json", states_document(np.eye(2))
            ),
            "bsc": self.write_json("bsc.json", {"rows": [[0.9, 0.1], [0.1, 0.9]]}),
            "gram": self.write_json("gram.json", gram_document([[1, 0.4], [0.4, 1]])),
        }

    def invoke(self, line):
        files = dict(self.files, tmp=self.tmpdir)
        return self.runner.invoke(cli, line.format(**files).split())

    def run_json(self, line):
        out = self.path("out.json")
        result = self.invoke(line + " --out " + out)
        self.assertEqual(result.exit_code, 0, result.output)
        with open(out) as f:
            return json.load(f)

    def run_csv(self, line, name="out.csv"):
        out = self.path(name)
        result = self.invoke(line + " --out " + out)
        self.assertEqual(result.exit_code, 0, result.output)
        with open(out, newline="") as f:
            return f.read()


class TestHelpers(unittest.TestCase):
    def test_parse_grid(self):
        self.assertEqual(parse_grid("0.1:0.5:0.1"), [0.1, 0.2, 0.3, 0.4, 0.5])
        self.assertEqual(parse_grid("1:1:0.5"), [1.0])
        for spec in ("1:2", "a:b:c", "1:2:0", "2:1:0.5"):
            with self.assertRaises(ValidationError):
                parse_grid(spec)

    def test_format_number(self):
        self.assertEqual(format_number(math.inf), "inf")
        self.assertEqual(format_number(0.5), "0.5")
        self.assertEqual(float(format_number(1 / 3)), 1 / 3)


class TestBinaryCommand(CliTest):
    def test_scalars(self):
        report = self.run_json("binary --epsilon 0.5")
        self.assertEqual(report["unit"], "nats")
        self.assertAlmostEqual(report["scalars"]["mu1"], 0.4700036, places=7)
        self.assertAlmostEqual(report["scalars"]["capacity"], 0.5623351, places=7)
        self.assertLess(report["cross_check_deviation"], 1e-10)

    def test_monotonicity_line(self):
        report = self.run_json("binary --epsilon 0.9")
        check = report["monotonicity"]
        self.assertEqual(check["reference_epsilon"], 0.5)
        self.assertTrue(check["consistent"])
        self.assertLess(report["scalars"]["capacity"], check["reference_capacity"])

    def test_bits(self):
        report = self.run_json("binary --epsilon 0.5 --bits")
        self.assertEqual(report["unit"], "bits")
        self.assertAlmostEqual(report["scalars"]["zero_rate_exponent"], 1.0, places=12)

    def test_bad_epsilon(self):
        result = self.invoke("binary --epsilon 1.5")
        self.assertEqual(result.exit_code, 1)
        self.assertIn("Validation Error", result.output)

    def test_missing_epsilon(self):
        self.assertEqual(self.invoke("binary").exit_code, 1)


class TestCurveCommand(CliTest):
    def test_csv(self):
        text = self.run_csv("curve --channel {binary} --rmin 0 --rmax 0.6 --points 7")
        lines = text.split("\n")
        self.assertEqual(lines[0], "R,E_r,E_ex,region")
        self.assertEqual(lines[-1], "")
        self.assertNotIn("\r", text)
        rows = [line.split(",") for line in lines[1:-1]]
        self.assertEqual(len(rows), 7)
        self.assertEqual(
            [row[3] for row in rows][::3], ["ex-curved", "r-linear", "ex-zero"]
        )
        e_r = [float(row[1]) for row in rows]
        e_ex = [float(row[2]) for row in rows]
        self.assertTrue(all(a >= b for a, b in zip(e_r, e_r[1:])))
        self.assertTrue(all(a >= b for a, b in zip(e_ex, e_ex[1:])))
        # mu_tilde(1) = ln 1.6
        self.assertEqual(e_ex[5:], [0.0, 0.0])
        self.assertAlmostEqual(e_ex[3], math.log(1.6) - 0.3, places=12)

    def test_threads_do_not_change_output(self):
        line = "curve --channel {binary} --points 21 --threads "
        single = self.run_csv(line + "1", name="single.csv")
        many = self.run_csv(line + "3", name="many.csv")
        self.assertEqual(single, many)

    def test_two_points(self):
        text = self.run_csv("curve --channel {binary} --rmin 0.1 --rmax 0.2 --points 2")
        self.assertEqual(len(text.splitlines()), 3)

    def test_orthogonal_channel(self):
        text = self.run_csv("curve --channel {orthogonal} --rmax 0.5 --points 3")
        for line in text.splitlines()[1:]:
            self.assertEqual(line.split(",")[2], "inf")

    def test_structured_envelope(self):
        report = self.run_json(
            "curve --channel {gram} --prior optimize --rmin 0.1 --rmax 0.5 "
            "--points 3 --format structured"
        )
        self.assertTrue(report["envelope"])
        self.assertIsNone(report["prior"])
        self.assertEqual(len(report["points"]), 3)

    def test_structured_prior(self):
        report = self.run_json(
            "curve --channel {binary} --prior uniform --points 3 --format structured"
        )
        self.assertFalse(report["envelope"])
        self.assertEqual(report["prior"], [0.5, 0.5])
        self.assertFalse(any(p["e_ex_at_limit"] for p in report["points"]))

    def test_bad_range(self):
        result = self.invoke("curve --channel {binary} --rmin 0.5 --rmax 0.5")
        self.assertEqual(result.exit_code, 1)

    def test_bad_points(self):
        result = self.invoke("curve --channel {binary} --points abc")
        self.assertEqual(result.exit_code, 1)
        result = self.invoke("curve --channel {binary} --points 1")
        self.assertEqual(result.exit_code, 1)


class TestScalarCommands(CliTest):
    def test_zero_rate_orthogonal(self):
        report = self.run_json("zero-rate --channel {orthogonal}")
        self.assertEqual(report["zero_rate_exponent"], "inf")
        self.assertEqual(report["witness"], [0, 1])
        self.assertIsNone(report["prior"])

    def test_zero_rate_binary(self):
        report = self.run_json("zero-rate --channel {binary}")
        self.assertAlmostEqual(report["zero_rate_exponent"], math.log(2), places=9)

    def test_capacity_identical_states(self):
        self.files["identical"] = self.write_json(
            "identical.json", states_document([[1, 0], [1, 0], [1, 0]])
        )
        report = self.run_json("capacity --channel {identical}")
        self.assertAlmostEqual(report["capacity"], 0.0, places=9)

    def test_capacity_binary(self):
        report = self.run_json("capacity --channel {binary}")
        self.assertAlmostEqual(report["capacity"], 0.5623351, places=7)
        self.assertEqual(len(report["prior"]), 2)


class TestVerifyCommand(CliTest):
    def test_binary_channel_passes(self):
        report = self.run_json(
            "verify --channel {binary} --M 4 --n 6 --samples 2000 --seed 42 "
            "--check random"
        )
        self.assertTrue(report["passed"])
        self.assertIsNone(report["expurgation"])
        self.assertEqual(report["random"]["samples"], 2000)

    def test_threads_do_not_change_output(self):
        line = (
            "verify --channel {orthogonal} --M 2 --n 4 --samples 50 --seed 3 "
            "--s-grid 1:1:1 --out {tmp}/verify-%d.json --threads %d"
        )
        outputs = []
        for threads in (1, 3):
            self.invoke(line % (threads, threads))
            outputs.append(self.read("verify-%d.json" % threads))
        self.assertEqual(outputs[0], outputs[1])

    def test_single_codeword_passes(self):
        report = self.run_json(
            "verify --channel {binary} --M 1 --n 3 --samples 10 --seed 5 "
            "--check random"
        )
        self.assertTrue(report["passed"])
        self.assertEqual(report["random"]["mean_error"], 0.0)
        self.assertTrue(all(row["passed"] for row in report["random"]["bounds"]))

    def test_norm_within_tolerance(self):
        self.files["loose"] = self.write_json(
            "loose.json", states_document(binary_vectors(0.5) * (1 + 4.9e-10))
        )
        report = self.run_json(
            "verify --channel {loose} --M 4 --n 8 --samples 200 --seed 5 "
            "--check random"
        )
        self.assertTrue(report["passed"])
        self.assertEqual(report["random"]["violations"]["helstrom"], 0)

    def test_too_many_codewords(self):
        result = self.invoke("verify --channel {binary} --M 1024 --seed 1")
        self.assertEqual(result.exit_code, 1)

    def test_missing_seed(self):
        self.assertEqual(self.invoke("verify --channel {binary}").exit_code, 1)


class TestClassicalCommand(CliTest):
    def test_report(self):
        report = self.run_json(
            "classical --channel {bsc} --s-grid 0.5:1:0.5 --sx-grid 1:2:1"
        )
        self.assertEqual(report["codewords"], 2)
        self.assertAlmostEqual(report["random_coding"][1]["rhs"], 0.8, places=12)
        self.assertAlmostEqual(report["expurgated"][0]["rhs"], 3.2, places=12)
        self.assertIsNone(report["cross_check_deviation"])

    def test_pure_state_cross_check(self):
        report = self.run_json(
            "classical --channel {bsc} --pure-states {binary} --M 4 --n 2"
        )
        self.assertLess(report["cross_check_deviation"], 1e-10)

    def test_optimize_not_available(self):
        result = self.invoke("classical --channel {bsc} --prior optimize")
        self.assertEqual(result.exit_code, 1)


class TestErrors(CliTest):
    def test_missing_file(self):
        result = self.invoke("capacity --channel {tmp}/missing.json")
        self.assertEqual(result.exit_code, 1)

    def test_bad_json(self):
        with open(self.path("broken.json"), "w") as f:
            f.write("{not json")
        result = self.invoke("capacity --channel {tmp}/broken.json")
        self.assertEqual(result.exit_code, 1)
        self.assertIn("Validation Error", result.output)

    def test_missing_channel(self):
        self.assertEqual(self.invoke("capacity").exit_code, 1)

    def test_non_psd_gram(self):
        a = 0.9
        self.files["bad"] = self.write_json(
            "bad.json", gram_document([[1, a, a], [a, 1, -a], [a, -a, 1]])
        )
        self.assertEqual(self.invoke("capacity --channel {bad}").exit_code, 1)
