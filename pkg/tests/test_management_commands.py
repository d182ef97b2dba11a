"""Unit tests for the orthoscheme management command"""

import dataclasses
import io
import json
import math
import tempfile
from pathlib import Path
from unittest.mock import patch

from django.core.cache import caches
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from orthoscheme.config import OrthoschemeConfig
from orthoscheme.exceptions import RootPrecisionFailure
from orthoscheme.geometry.sangwine_yager import sy_check
from orthoscheme.services.acceptance import CheckResult

COMMAND_MODULE = "orthoscheme.management.commands.orthoscheme"


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        """Set up test fixtures"""
        OrthoschemeConfig._instance = None
        caches["default"].clear()

    def tearDown(self):
        OrthoschemeConfig._instance = None

    def run_command(self, *args):
        out = io.StringIO()
        call_command("orthoscheme", *args, stdout=out)
        return out.getvalue()

    def run_json(self, *args):
        return json.loads(self.run_command(*args))

    def assertCommandFails(self, returncode, *args):
        with self.assertRaises(CommandError) as cm:
            self.run_command(*args)
        self.assertEqual(cm.exception.returncode, returncode)
        return cm.exception


class TestIvCommand(CommandTestCase):
    """Test cases for the iv sub-command"""

    def test_all_volumes(self):
        """Test V_0..V_3 of the 3-dimensional orthoscheme"""
        document = self.run_json("iv", "--n", "3")
        values = document["result"]["values"]

        self.assertEqual(document["command"], "iv")
        self.assertEqual(document["result"]["method"], "exact-dp")
        self.assertAlmostEqual(values[1], 1 + 1 / math.sqrt(2) + 1 / math.sqrt(3), places=14)
        self.assertAlmostEqual(values[3], 1 / 6, places=15)

    def test_single_volume_by_enumeration(self):
        """Test --k with the enum method"""
        document = self.run_json("iv", "--n", "4", "--k", "1", "--method", "enum")

        self.assertEqual(document["result"]["method"], "exact-enum")
        self.assertAlmostEqual(document["result"]["value"], 1 + 1 / math.sqrt(2) + 1 / math.sqrt(3) + 0.5, places=14)

    def test_csv_format(self):
        """Test the CSV table with its header"""
        text = self.run_command("iv", "--n", "2", "--format", "csv")
        self.assertTrue(text.startswith("k,value,stderr\r\n0,1,\r\n"))

    def test_output_file(self):
        """Test that --output writes the report to disk and nothing to stdout"""
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / "iv.json"
            text = self.run_command("iv", "--n", "2", "--output", str(path))

            self.assertEqual(text, "")
            self.assertEqual(json.loads(path.read_text(encoding="utf-8"))["result"]["n"], 2)

    def test_k_above_n(self):
        """Test that --k > --n is a usage error"""
        error = self.assertCommandFails(2, "iv", "--n", "3", "--k", "4")
        self.assertIn("--k must lie in [0, 3]", str(error))

    def test_invalid_n(self):
        """Test that a nonpositive dimension is a usage error"""
        self.assertCommandFails(2, "iv", "--n", "0")

    def test_budget_exceeded(self):
        """Test that an enumeration over budget exits with the numerical code"""
        error = self.assertCommandFails(3, "iv", "--n", "30", "--method", "enum", "--term-budget", "10")
        self.assertIn("BudgetExceeded", str(error))

    def test_single_volume_skips_the_other_k(self):
        """Test that --k enumerates V_k alone, within the default budget"""
        with patch(f"{COMMAND_MODULE}.exact_volumes") as exact_volumes:
            document = self.run_json("iv", "--n", "30", "--k", "1", "--method", "enum")

        exact_volumes.assert_not_called()
        self.assertEqual(document["parameters"], {"n": 30, "k": 1, "method": "enum"})
        self.assertEqual(document["result"]["method"], "exact-enum")
        expected = math.fsum(1 / math.sqrt(j) for j in range(1, 31))
        self.assertAlmostEqual(document["result"]["value"], expected, places=13)

    def test_single_volume_budget_is_per_k(self):
        """Test that --k is refused only when C(n, k) exceeds the budget"""
        error = self.assertCommandFails(3, "iv", "--n", "30", "--k", "15", "--method", "enum")
        self.assertIn("155117520", str(error))


class TestSamplingCommands(CommandTestCase):
    """Test cases for gauss and euler"""

    def test_gauss(self):
        """Test the per-face and per-k layout of a small run"""
        document = self.run_json("gauss", "--n", "3", "--samples", "2000", "--seed", "1", "--threads", "1")
        result = document["result"]

        self.assertEqual(document["parameters"], {"n": 3, "samples": 2000, "seed": 1, "chunk_size": 65536})
        self.assertEqual(len(result["faces"]), 15)
        self.assertEqual(len(result["totals"]), 4)
        self.assertEqual(result["faces"][-1]["gamma_hat"], 1)

    def test_gauss_thread_independent(self):
        """Test byte-identical output for different thread counts"""
        common = ("gauss", "--n", "4", "--samples", "5000", "--seed", "42", "--chunk-size", "512")
        self.assertEqual(self.run_command(*common, "--threads", "1"), self.run_command(*common, "--threads", "8"))

    def test_gauss_records_chunk_size(self):
        """Test that the chunking, which changes the draws, is part of the parameters"""
        common = ("gauss", "--n", "3", "--samples", "3000", "--seed", "5", "--threads", "1")
        small = self.run_json(*common, "--chunk-size", "1000")
        large = self.run_json(*common, "--chunk-size", "3000")

        self.assertEqual(small["parameters"]["chunk_size"], 1000)
        self.assertEqual(large["parameters"]["chunk_size"], 3000)
        self.assertNotEqual(small["result"]["faces"], large["result"]["faces"])

    def test_euler(self):
        """Test the positive octant: Gamma = pi / 2, measure 1/8"""
        document = self.run_json("euler", "--rays", "1,0,0,0,1,0,0,0,1")

        self.assertAlmostEqual(document["result"]["gamma"], math.pi / 2, places=14)
        self.assertAlmostEqual(document["result"]["gaussian_measure"], 0.125, places=15)

    def test_euler_bad_rays(self):
        """Test that the wrong number of components is a usage error"""
        self.assertCommandFails(2, "euler", "--rays", "1,0,0,0,1,0")


class TestSyCommand(CommandTestCase):
    """Test cases for the sy sub-command"""

    def test_passing_dimension(self):
        """Test n = 2 with both verdicts true"""
        document = self.run_json("sy", "--n", "2")

        self.assertTrue(document["result"]["pass_bracket"])
        self.assertTrue(document["result"]["pass_real"])
        self.assertEqual(len(document["result"]["roots"]), 2)

    def test_failing_check_exits_one(self):
        """Test that a failed verdict still writes the report, then exits 1"""
        failing = dataclasses.replace(sy_check(2), pass_real=False)
        out = io.StringIO()
        with patch(f"{COMMAND_MODULE}.sy_report", return_value=failing), self.assertRaises(CommandError) as cm:
            call_command("orthoscheme", "sy", "--n", "2", stdout=out)

        self.assertEqual(cm.exception.returncode, 1)
        self.assertFalse(json.loads(out.getvalue())["result"]["pass_real"])

    def test_root_failure_exits_three(self):
        """Test that an unresolvable root computation is a numerical failure"""
        with patch(f"{COMMAND_MODULE}.sy_report", side_effect=RootPrecisionFailure("no convergence")):
            self.assertCommandFails(3, "sy", "--n", "5")


class TestLimitAndMkCommands(CommandTestCase):
    """Test cases for limit and mk"""

    def test_limit(self):
        """Test one row per requested n"""
        document = self.run_json("limit", "--k", "1", "--n-list", "10,100")
        rows = document["result"]["rows"]

        self.assertEqual([row["n"] for row in rows], [10, 100])
        self.assertAlmostEqual(rows[0]["omega_k"], 2.0, places=14)
        self.assertLess(rows[1]["relative_error"], rows[0]["relative_error"])

    def test_limit_rejects_bad_lists(self):
        """Test unparsable lists and n below k"""
        self.assertCommandFails(2, "limit", "--k", "1", "--n-list", "10,abc")
        self.assertCommandFails(2, "limit", "--k", "3", "--n-list", "2")

    def test_mk(self):
        """Test m_1 = pi / 2"""
        document = self.run_json("mk", "--k-max", "3")
        rows = document["result"]["rows"]

        self.assertEqual(len(rows), 3)
        self.assertAlmostEqual(rows[0]["m_k"], math.pi / 2, places=14)

    def test_mk_csv(self):
        """Test the mk CSV header"""
        text = self.run_command("mk", "--k-max", "2", "--format", "csv")
        self.assertTrue(text.startswith("k,omega_k,v_k,m_k,m_k_scaled,log_omega_k,log_v_k\r\n"))

    def test_mk_underflow_written_as_null(self):
        """Test that underflowed omega_k and v_k are null in JSON and empty in CSV"""
        rows = self.run_json("mk", "--k-max", "600")["result"]["rows"]
        last = rows[-1]

        self.assertIsNone(last["omega_k"])
        self.assertIsNone(last["v_k"])
        self.assertLess(last["log_omega_k"], -745)

        line = self.run_command("mk", "--k-max", "600", "--format", "csv").splitlines()[-1]
        self.assertTrue(line.startswith("600,,,"))


class TestVerifyCommand(CommandTestCase):
    """Test cases for the verify sub-command"""

    def test_selected_criteria(self):
        """Test that --only runs just those checks"""
        document = self.run_json("verify", "--only", "1,2", "--samples", "1000")

        self.assertEqual([check["criterion"] for check in document["result"]["checks"]], [1, 2])
        self.assertTrue(document["result"]["all_passed"])

    def test_exact_only_filters_sampled_criteria(self):
        """Test that --exact-only drops the Monte Carlo criteria"""
        with patch(f"{COMMAND_MODULE}.run_acceptance", return_value=[]) as mock_run:
            self.run_command("verify", "--only", "1,4", "--exact-only")

        self.assertEqual(mock_run.call_args[0][1], {1})

    def test_plan_from_options(self):
        """Test that the sampling options reach the plan"""
        with patch(f"{COMMAND_MODULE}.run_acceptance", return_value=[]) as mock_run:
            self.run_command("verify", "--samples", "500", "--seed", "9", "--threads", "2", "--chunk-size", "100")

        plan, only = mock_run.call_args[0]
        self.assertEqual((plan.samples, plan.seed, plan.threads, plan.chunk_size), (500, 9, 2, 100))
        self.assertIsNone(only)

    def test_failures_exit_one(self):
        """Test the failed-check exit code and message"""
        results = [CheckResult(1, "a", True, "ok"), CheckResult(4, "b", False, "off by 9 sigma")]
        with patch(f"{COMMAND_MODULE}.run_acceptance", return_value=results):
            error = self.assertCommandFails(1, "verify")

        self.assertIn("1 of 2 checks failed: 4", str(error))


class TestCacheCommand(CommandTestCase):
    """Test cases for the cache sub-command"""

    def test_status(self):
        """Test the status summary"""
        text = self.run_command("cache", "status")

        self.assertIn("Orthoscheme result cache - backend 'default'", text)
        self.assertIn("Enabled: True", text)
        self.assertIn("Status: Connected", text)
        self.assertIn("Type: LocMemCache", text)

    def test_clear(self):
        """Test that clear empties the backend"""
        caches["default"].set("orthoscheme:probe", 1)

        text = self.run_command("cache", "clear")

        self.assertIn("Cleared cache backend 'default'", text)
        self.assertIsNone(caches["default"].get("orthoscheme:probe"))

    def test_status_unavailable_backend(self):
        """Test the status of a backend that cannot be created"""
        OrthoschemeConfig().set("CACHE.BACKEND", "missing")

        self.assertIn("Status: unavailable", self.run_command("cache", "status"))
