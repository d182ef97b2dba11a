"""Unit tests for exact intrinsic volumes from composition sums"""

import math
from unittest.mock import patch

from django.test import SimpleTestCase

from orthoscheme.exceptions import BudgetExceeded, InvalidDimension, NumericalError
from orthoscheme.geometry.exact import (
    IntrinsicVolumes,
    Method,
    Provenance,
    composition_sum_dp,
    composition_sum_enumerate,
    composition_sum_table,
    composition_sums_dp,
    intrinsic_volume,
    intrinsic_volumes_all,
    iter_compositions,
    limit_row,
)

SQRT2 = math.sqrt(2)
SQRT3 = math.sqrt(3)


class TestCompositions(SimpleTestCase):
    """Test cases for composition enumeration"""

    def test_compositions_of_small_case(self):
        """Test the compositions with two parts and total at most 3"""
        self.assertEqual(sorted(iter_compositions(3, 2)), [(1, 1), (1, 2), (2, 1)])

    def test_composition_count_is_binomial(self):
        """Test that there are C(n, k) compositions"""
        for n in range(1, 9):
            for k in range(1, n + 1):
                with self.subTest(n=n, k=k):
                    compositions = list(iter_compositions(n, k))
                    self.assertEqual(len(compositions), math.comb(n, k))
                    self.assertTrue(all(sum(c) <= n and min(c) >= 1 for c in compositions))

    def test_rejects_out_of_range(self):
        """Test that k outside [1, n] and n < 1 raise"""
        for n, k in ((3, 0), (3, 4), (0, 1)):
            with self.subTest(n=n, k=k), self.assertRaises(InvalidDimension):
                list(iter_compositions(n, k))


class TestCompositionSums(SimpleTestCase):
    """Test cases for S_k(n) by enumeration and by dynamic programming"""

    def test_known_sums(self):
        """Test S_1(3), S_2(3) and S_n(n) = 1"""
        self.assertAlmostEqual(composition_sum_enumerate(3, 1), 1 + 1 / SQRT2 + 1 / SQRT3, places=15)
        self.assertAlmostEqual(composition_sum_enumerate(3, 2), 1 + SQRT2, places=15)
        for n in range(1, 10):
            with self.subTest(n=n):
                self.assertAlmostEqual(composition_sum_dp(n, n), 1.0, places=14)

    def test_dp_matches_enumeration(self):
        """Test that both evaluations agree to 1e-12 relative for n <= 12"""
        for n in range(1, 13):
            for k in range(1, n + 1):
                with self.subTest(n=n, k=k):
                    dp = composition_sum_dp(n, k)
                    enumerated = composition_sum_enumerate(n, k)
                    self.assertLessEqual(abs(dp - enumerated) / enumerated, 1e-12)

    def test_all_sums_in_one_pass(self):
        """Test that composition_sums_dp returns S_1..S_kmax in order"""
        sums = composition_sums_dp(6, 4)

        self.assertEqual(len(sums), 4)
        for k, total in enumerate(sums, start=1):
            with self.subTest(k=k):
                self.assertAlmostEqual(total, composition_sum_dp(6, k), places=13)

    def test_budget_exceeded(self):
        """Test that enumeration refuses to exceed the term budget"""
        with self.assertRaises(BudgetExceeded):
            composition_sum_enumerate(30, 15, term_budget=1000)

    def test_budget_exactly_met(self):
        """Test that C(n, k) terms within the budget are fine"""
        self.assertGreater(composition_sum_enumerate(6, 3, term_budget=math.comb(6, 3)), 0)

    def test_table_rows(self):
        """Test the dynamic-programming table entries"""
        table = composition_sum_table(4, 3)

        self.assertEqual(len(table.rows), 3)
        self.assertAlmostEqual(table.value(1, 2), 1 / SQRT2)
        self.assertEqual(table.value(2, 1), 0.0)
        # T_2(3) = 1*(1/sqrt2) + (1/sqrt2)*1
        self.assertAlmostEqual(table.value(2, 3), SQRT2)
        self.assertAlmostEqual(table.total(), composition_sum_dp(4, 3), places=14)
        self.assertAlmostEqual(table.total(1), composition_sum_dp(4, 1), places=14)

    def test_sums_increase_with_n(self):
        """Test S_k(n) < S_k(n + 1) for k >= 2"""
        for k in range(2, 8):
            previous = composition_sum_dp(k, k)
            for n in range(k + 1, 40):
                current = composition_sum_dp(n, k)
                with self.subTest(k=k, n=n):
                    self.assertGreater(current, previous)
                previous = current

    def test_table_is_read_only(self):
        """Test that table rows cannot be modified"""
        table = composition_sum_table(3, 2)
        with self.assertRaises(ValueError):
            table.rows[0][1] = 5.0


class TestIntrinsicVolumes(SimpleTestCase):
    """Test cases for intrinsic_volume and intrinsic_volumes_all"""

    def test_n3_values(self):
        """Test V(K) for n = 3"""
        volumes = intrinsic_volumes_all(3)
        expected = [1.0, 1 + 1 / SQRT2 + 1 / SQRT3, (1 + SQRT2) / 2, 1 / 6]
        for k, value in enumerate(expected):
            with self.subTest(k=k):
                self.assertAlmostEqual(volumes[k], value, places=14)

    def test_mean_width_n3_and_n4(self):
        """Test V_1 for n = 3 and n = 4 to 1e-12"""
        self.assertLessEqual(abs(intrinsic_volume(3, 1) - (1 + 1 / SQRT2 + 1 / SQRT3)), 1e-12)
        self.assertLessEqual(abs(intrinsic_volume(4, 1) - (1 + 1 / SQRT2 + 1 / SQRT3 + 0.5)), 1e-12)

    def test_n1_is_unit_segment(self):
        """Test V_0 = V_1 = 1 for the segment"""
        volumes = intrinsic_volumes_all(1)
        self.assertEqual(volumes.values, (1.0, 1.0))

    def test_top_volume_is_inverse_factorial(self):
        """Test V_n = 1 / n!"""
        for n in range(1, 15):
            with self.subTest(n=n):
                self.assertTrue(math.isclose(intrinsic_volume(n, n), 1 / math.factorial(n), rel_tol=1e-12))

    def test_mean_width_grows_with_n(self):
        """Test that V_1 increases with n by exactly n^(-1/2)"""
        for n in range(2, 20):
            with self.subTest(n=n):
                gap = intrinsic_volume(n, 1) - intrinsic_volume(n - 1, 1)
                self.assertAlmostEqual(gap, 1 / math.sqrt(n), places=13)

    def test_methods_agree(self):
        """Test that enum and dp give the same vector"""
        enumerated = intrinsic_volumes_all(8, "enum")
        programmed = intrinsic_volumes_all(8, Method.DP)
        for k in range(9):
            with self.subTest(k=k):
                self.assertTrue(math.isclose(enumerated[k], programmed[k], rel_tol=1e-12))

    def test_provenance(self):
        """Test that the method is recorded on the result"""
        self.assertEqual(intrinsic_volumes_all(4, "enum").method, Provenance.EXACT_ENUM)
        self.assertEqual(intrinsic_volumes_all(4).method, Provenance.EXACT_DP)
        self.assertIsNone(intrinsic_volumes_all(4).stderr)

    def test_v0_is_one(self):
        """Test V_0 = 1 without touching the composition sums"""
        self.assertEqual(intrinsic_volume(50, 0, "enum", term_budget=1), 1.0)

    def test_invalid_arguments(self):
        """Test that out-of-range k, bad n and unknown methods raise"""
        with self.assertRaises(InvalidDimension):
            intrinsic_volume(3, 4)
        with self.assertRaises(InvalidDimension):
            intrinsic_volume(0, 0)
        with self.assertRaises(ValueError):
            intrinsic_volume(3, 1, "simplex")

    def test_large_k_uses_log_factorial(self):
        """Test that V_k stays finite and positive beyond 170!"""
        value = intrinsic_volume(175, 171)
        self.assertTrue(math.isfinite(value))
        self.assertGreater(value, 0.0)

    def test_enum_budget_propagates(self):
        """Test that intrinsic_volumes_all passes the budget through"""
        with self.assertRaises(BudgetExceeded):
            intrinsic_volumes_all(30, "enum", term_budget=100)

    def test_container_shape_checked(self):
        """Test that IntrinsicVolumes rejects vectors of the wrong length"""
        with self.assertRaises(InvalidDimension):
            IntrinsicVolumes(n=3, values=(1.0, 2.0), method=Provenance.EXACT_DP)
        with self.assertRaises(InvalidDimension):
            IntrinsicVolumes(n=1, values=(1.0, 1.0), method=Provenance.MC_ESTIMATE, stderr=(0.0,))

    def test_enum_total_budget_checked_before_enumerating(self):
        """Test that an over-budget vector fails before any S_k is enumerated"""
        with patch("orthoscheme.geometry.exact.composition_sum_enumerate") as enumerate_sum:
            with self.assertRaises(BudgetExceeded) as cm:
                intrinsic_volumes_all(20, "enum", term_budget=10**5)

        enumerate_sum.assert_not_called()
        self.assertIn("1048575", str(cm.exception))

    def test_single_volume_only_enumerates_its_own_k(self):
        """Test that V_1 of n = 30 fits a budget far below 2^30"""
        value = intrinsic_volume(30, 1, "enum", term_budget=100)
        self.assertAlmostEqual(value, math.fsum(1 / math.sqrt(j) for j in range(1, 31)), places=13)

    def test_v0_must_be_one(self):
        """Test that IntrinsicVolumes rejects V_0 other than 1"""
        with self.assertRaises(NumericalError):
            IntrinsicVolumes(n=2, values=(0.9, 2.0, 0.5), method=Provenance.EXACT_DP)

    def test_negative_volume_rejected(self):
        """Test that IntrinsicVolumes rejects negative or non-finite entries"""
        for middle in (-0.1, math.nan, math.inf):
            with self.subTest(middle=middle):
                with self.assertRaises(NumericalError):
                    IntrinsicVolumes(n=2, values=(1.0, middle, 0.5), method=Provenance.MC_ESTIMATE)

    def test_top_volume_must_be_inverse_factorial(self):
        """Test that IntrinsicVolumes rejects V_n other than 1 / n!"""
        with self.assertRaises(NumericalError):
            IntrinsicVolumes(n=3, values=(1.0, 2.0, 1.0, 0.2), method=Provenance.EXACT_DP)
        volumes = IntrinsicVolumes(n=3, values=(1.0, 2.0, 1.0, 1 / 6), method=Provenance.EXACT_DP)
        self.assertEqual(volumes[3], 1 / 6)

    def test_top_volume_checked_past_float_factorial(self):
        """Test that the V_n check holds where n! overflows a double"""
        volumes = intrinsic_volumes_all(180)
        self.assertEqual(volumes[180], 0.0)


class TestLimitRow(SimpleTestCase):
    """Test cases for the scaled composition sum"""

    def test_limit_row_definition(self):
        """Test n^(-k/2) S_k(n) on a small case"""
        self.assertAlmostEqual(limit_row(4, 2), composition_sum_dp(4, 2) / 4, places=15)

    def test_limit_row_k1_approaches_two(self):
        """Test that n^(-1/2) S_1(n) approaches omega_1 = 2 from below"""
        value = limit_row(10_000, 1)
        self.assertLess(value, 2.0)
        self.assertGreater(value, 1.98)
