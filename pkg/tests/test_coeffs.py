import io
import unittest
from contextlib import redirect_stderr

import numpy as np

from core.boxopt import IllPosedProblemError, OptimizerConfig
from core.coeffs import (FuzzyObservation, MembershipCurve, _repair_nesting, alpha_grid, crisp_least_squares,
                         estimate_coefficient_curves)
from core.fuznum import DomainError, TrapezoidalFuzzyNumber, coa_from_samples
from core.reference_values import worked_example_observations

T = TrapezoidalFuzzyNumber


class TestCrispLeastSquares(unittest.TestCase):
    def test_worked_example_modal_values(self):
        b0, b1 = crisp_least_squares([1, 2, 3, 4, 5], [2.5, 5.5, 6.5, 9.5, 11.5])
        self.assertAlmostEqual(b1, 2.2, places=12)
        self.assertAlmostEqual(b0, 0.5, places=12)

    def test_identity_line(self):
        self.assertEqual(crisp_least_squares([0, 1], [0, 1]), (0.0, 1.0))

    def test_constant_response(self):
        b0, b1 = crisp_least_squares([1, 2, 3], [4.0, 4.0, 4.0])
        self.assertEqual(b1, 0.0)
        self.assertEqual(b0, 4.0)

    def test_intercept_identity(self):
        x, y = [0.3, 1.7, 2.2, 5.9], [1.0, -2.0, 0.5, 3.3]
        b0, b1 = crisp_least_squares(x, y)
        self.assertAlmostEqual(b0, np.mean(y) - b1 * np.mean(x), delta=1e-12)

    def test_equal_x_is_ill_posed(self):
        with self.assertRaises(IllPosedProblemError):
            crisp_least_squares([1, 1, 1], [1, 2, 3])


class TestMembershipCurve(unittest.TestCase):
    def setUp(self):
        self.curve = MembershipCurve.from_bounds([0.0, 0.5, 1.0], [1.0, 1.5, 2.0], [4.0, 3.0, 2.5])

    def test_rejects_non_nested_cuts(self):
        with self.assertRaises(DomainError):
            MembershipCurve.from_bounds([0.0, 1.0], [1.0, 0.5], [2.0, 1.5])

    def test_rejects_bad_alpha_grid(self):
        with self.assertRaises(DomainError):
            MembershipCurve.from_bounds([0.0, 0.9], [0.0, 0.0], [1.0, 1.0])
        with self.assertRaises(DomainError):
            MembershipCurve.from_bounds([0.0, 0.5, 0.5, 1.0], [0, 0, 0, 0], [1, 1, 1, 1])

    def test_membership_reconstruction(self):
        self.assertEqual(self.curve.membership(0.5), 0.0)
        self.assertEqual(self.curve.membership(2.2), 1.0)
        self.assertAlmostEqual(self.curve.membership(1.5), 0.5, places=12)
        self.assertAlmostEqual(self.curve.membership(1.25), 0.25, places=12)
        self.assertAlmostEqual(self.curve.membership(3.5), 0.25, places=12)
        self.assertAlmostEqual(self.curve.membership(2.75), 0.75, places=12)

    def test_cut_at_interpolates(self):
        cut = self.curve.cut_at(0.25)
        self.assertAlmostEqual(cut.lo, 1.25, places=12)
        self.assertAlmostEqual(cut.hi, 3.5, places=12)

    def test_alpha_grid(self):
        grid = alpha_grid(21)
        self.assertEqual(grid[0], 0.0)
        self.assertEqual(grid[-1], 1.0)
        self.assertEqual(len(grid), 21)
        with self.assertRaises(DomainError):
            alpha_grid(1)


class TestEstimateCoefficientCurves(unittest.TestCase):
    def setUp(self):
        self.data = worked_example_observations()
        self.opt = OptimizerConfig(multistart_count=4, rng_seed=0)

    def test_worked_example_slope_curve(self):
        b0, b1 = estimate_coefficient_curves(self.data, 21, self.opt)
        self.assertEqual(len(b1.curve.levels), 21)
        self.assertAlmostEqual(b1.curve.core.lo, 2.2, places=12)
        self.assertAlmostEqual(b1.curve.core.hi, 2.2, places=12)
        self.assertAlmostEqual(b1.curve.support.lo, 1.5, places=12)
        self.assertAlmostEqual(b1.curve.support.hi, 2.9, places=12)
        self.assertEqual(b1.repairs, [])

    def test_worked_example_crisp_values(self):
        b0, b1 = estimate_coefficient_curves(self.data, 21, self.opt)
        # The slope curve is symmetric about its peak, so COA equals the peak.
        for level in b1.curve.levels:
            self.assertAlmostEqual(level.cut.midpoint, 2.2, places=12)
        self.assertAlmostEqual(b1.crisp, 2.2, delta=1e-9)
        self.assertAlmostEqual(b0.crisp, 0.5, delta=1e-9)
        self.assertTrue(b0.curve.support.contains(b0.crisp))

    def test_crisp_value_against_quadrature(self):
        _, b1 = estimate_coefficient_curves(self.data, 21, self.opt)
        z = np.linspace(b1.curve.support.lo, b1.curve.support.hi, 20001)
        mu = np.array([b1.curve.membership(float(v)) for v in z])
        self.assertAlmostEqual(b1.crisp, coa_from_samples(z, mu), places=6)

    def test_all_crisp_data_reproduces_least_squares(self):
        x = [0.5, 1.0, 2.5, 4.0]
        y = [1.2, 2.9, 4.1, 8.8]
        data = [FuzzyObservation(T.crisp(a), T.crisp(b)) for a, b in zip(x, y)]
        b0, b1 = estimate_coefficient_curves(data, 5, self.opt)
        ols_b0, ols_b1 = crisp_least_squares(x, y)
        for level in b0.curve.levels:
            self.assertEqual((level.cut.lo, level.cut.hi), (ols_b0, ols_b0))
        for level in b1.curve.levels:
            self.assertEqual((level.cut.lo, level.cut.hi), (ols_b1, ols_b1))
        self.assertEqual(b0.crisp, ols_b0)
        self.assertEqual(b1.crisp, ols_b1)

    def test_widening_a_response_never_shrinks_support(self):
        b0, b1 = estimate_coefficient_curves(self.data, 5, self.opt)
        wider = list(self.data)
        y = wider[2].y
        wider[2] = FuzzyObservation(wider[2].x, T(y.l - 1.0, y.m1, y.m2, y.r + 0.5))
        w0, w1 = estimate_coefficient_curves(wider, 5, self.opt)
        self.assertTrue(w0.curve.support.contains_interval(b0.curve.support, tol=1e-12))
        self.assertTrue(w1.curve.support.contains_interval(b1.curve.support, tol=1e-12))

    def test_fuzzy_x_curves_are_nested(self):
        data = [
            FuzzyObservation(T(0.8, 1.0, 1.0, 1.2), T(1.5, 2.0, 2.2, 2.6)),
            FuzzyObservation(T(1.9, 2.0, 2.1, 2.3), T(3.6, 4.0, 4.0, 4.5)),
            FuzzyObservation(T(2.8, 3.0, 3.0, 3.1), T(5.7, 6.1, 6.2, 6.6)),
        ]
        b0, b1 = estimate_coefficient_curves(data, 4, self.opt)
        for estimate in (b0, b1):
            levels = estimate.curve.levels
            for lower, upper in zip(levels[:-1], levels[1:]):
                self.assertTrue(lower.cut.contains_interval(upper.cut))
            self.assertTrue(estimate.curve.support.contains(estimate.crisp))

    def test_ill_posed_level_is_named(self):
        data = [
            FuzzyObservation(T(0.0, 1.0, 1.0, 2.5), T(1.0, 2.0, 2.0, 3.0)),
            FuzzyObservation(T(1.5, 2.0, 2.0, 3.0), T(2.0, 3.0, 3.0, 4.0)),
        ]
        with self.assertRaises(IllPosedProblemError) as ctx:
            estimate_coefficient_curves(data, 3, self.opt)
        self.assertEqual(ctx.exception.alpha, 0.0)

    def test_needs_two_observations(self):
        with self.assertRaises(IllPosedProblemError):
            estimate_coefficient_curves(self.data[:1], 3, self.opt)


class TestNestingRepair(unittest.TestCase):
    def test_violations_are_widened_and_reported(self):
        alphas = np.array([0.0, 0.5, 1.0])
        lo = np.array([1.0, 1.2, 1.1])
        hi = np.array([3.0, 2.0, 2.5])
        stderr = io.StringIO()
        with redirect_stderr(stderr):
            repairs = _repair_nesting(alphas, lo, hi, "b1", verbose=False)
        np.testing.assert_allclose(lo, [1.0, 1.1, 1.1])
        np.testing.assert_allclose(hi, [3.0, 2.5, 2.5])
        self.assertEqual({(r.alpha, r.side) for r in repairs}, {(0.5, 'lo'), (0.5, 'hi')})
        self.assertIn("WARNING", stderr.getvalue())

    def test_tiny_repairs_stay_quiet(self):
        alphas = np.array([0.0, 1.0])
        lo = np.array([1.0 + 1e-9, 1.0])
        hi = np.array([2.0, 2.0])
        stderr = io.StringIO()
        with redirect_stderr(stderr):
            repairs = _repair_nesting(alphas, lo, hi, "b0", verbose=False)
        self.assertEqual(len(repairs), 1)
        self.assertEqual(stderr.getvalue(), "")


if __name__ == '__main__':
    unittest.main()
