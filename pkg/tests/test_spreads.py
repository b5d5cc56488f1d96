import unittest

import numpy as np

from core.boxopt import OptimizerConfig
from core.coeffs import FuzzyObservation, crisp_least_squares
from core.fuznum import DomainError, TrapezoidalFuzzyNumber, affine_image
from core.reference_values import worked_example_observations
from core.spreads import (ConstraintInfeasibilityError, ErrorTerm, SpreadConfig, derive_min_spreads, evaluate_model,
                          fit_error_term, fit_nonuniform, fit_uniform_baseline, fitted_response)

T = TrapezoidalFuzzyNumber
FAST = OptimizerConfig(multistart_count=4, rng_seed=0)


def line_data(b0: float, b1: float, half_width: float):
    """Crisp x with symmetric triangular responses centred exactly on b0 + b1 x."""
    data = []
    for x in (1.0, 2.0, 3.0, 4.0):
        y = b0 + b1 * x
        data.append(FuzzyObservation(T.crisp(x), T(y - half_width, y, y, y + half_width)))
    return data


FUZZY_X_DATA = [
    FuzzyObservation(T(0.9, 1.0, 1.0, 1.1), T(1.5, 2.0, 2.2, 2.8)),
    FuzzyObservation(T(1.9, 2.0, 2.0, 2.1), T(3.4, 4.1, 4.1, 4.9)),
    FuzzyObservation(T(2.9, 3.0, 3.0, 3.1), T(5.5, 6.0, 6.3, 6.9)),
    FuzzyObservation(T(3.9, 4.0, 4.0, 4.1), T(7.4, 8.0, 8.1, 8.6)),
]


class TestSpreadHelpers(unittest.TestCase):
    def test_min_spreads_of_worked_example(self):
        self.assertEqual(derive_min_spreads(worked_example_observations()), (0.5, 0.5))

    def test_min_spreads_need_data(self):
        with self.assertRaises(ValueError):
            derive_min_spreads([])

    def test_fitted_response_adds_error_term(self):
        obs = FuzzyObservation(T.crisp(1.0), T(2.0, 2.5, 2.5, 3.0))
        self.assertEqual(fitted_response(obs, 1.0, 2.0, ErrorTerm(0.5, 0.25)), T(2.5, 3.0, 3.0, 3.25))

    def test_spread_config_overrides(self):
        cfg = SpreadConfig.for_data(worked_example_observations(), l_min=0.1, r_min=None)
        self.assertEqual((cfg.l_min, cfg.r_min), (0.1, 0.5))

    def test_evaluate_model_checks_length(self):
        with self.assertRaises(ValueError):
            evaluate_model(worked_example_observations(), 0.5, 2.2, [ErrorTerm(0.5, 0.5)])


class TestFitErrorTerm(unittest.TestCase):
    def setUp(self):
        self.data = worked_example_observations()
        self.cfg = SpreadConfig.for_data(self.data)

    def test_pinned_terms_for_narrow_observations(self):
        for i in range(4):
            term, _ = fit_error_term(self.data[i], 0.5, 2.2, self.cfg, index=i)
            self.assertAlmostEqual(term.left, 0.5, places=12)
            self.assertAlmostEqual(term.right, 0.5, places=12)

    def test_wide_observation_against_scan(self):
        obs = self.data[4]
        term, d = fit_error_term(obs, 0.5, 2.2, self.cfg, index=4)
        self.assertAlmostEqual(term.left + term.right, 5.0, delta=1e-9)
        self.assertLess(d, 1e-6)

        scan = [evaluate_model([obs], 0.5, 2.2, [ErrorTerm(l, 5.0 - l)])[0] for l in np.arange(0.5, 4.5 + 1e-9, 1e-3)]
        self.assertLessEqual(d, min(scan) + 1e-7)

    def test_moving_away_from_optimum_costs(self):
        obs = self.data[4]
        term, d = fit_error_term(obs, 0.5, 2.2, self.cfg)
        for delta in (-0.1, 0.1):
            moved = ErrorTerm(term.left + delta, term.right - delta)
            self.assertGreater(evaluate_model([obs], 0.5, 2.2, [moved])[0], d)

    def test_exact_match_has_zero_discrepancy(self):
        obs = FuzzyObservation(T.crisp(2.0), T(3.0, 5.0, 5.0, 6.0))
        term, d = fit_error_term(obs, 1.0, 2.0, SpreadConfig())
        self.assertAlmostEqual(term.left, 2.0, places=6)
        self.assertAlmostEqual(term.right, 1.0, places=6)
        self.assertLess(d, 1e-6)

    def test_propagated_spread_too_wide(self):
        obs = FuzzyObservation(T(0.9, 1.0, 1.0, 1.1), T(1.0, 2.0, 2.0, 2.1))
        with self.assertRaises(ConstraintInfeasibilityError) as ctx:
            fit_error_term(obs, 0.0, 10.0, SpreadConfig(), index=2)
        self.assertEqual(ctx.exception.observation, 2)
        self.assertIn("Observation 3", str(ctx.exception))

    def test_lower_bounds_too_large(self):
        obs = FuzzyObservation(T.crisp(1.0), T(0.0, 1.0, 1.0, 2.0))
        with self.assertRaises(ConstraintInfeasibilityError):
            fit_error_term(obs, 0.0, 1.0, SpreadConfig(l_min=1.5, r_min=1.5))

    def test_lower_bounds_that_exactly_fit(self):
        obs = FuzzyObservation(T.crisp(1.0), T(0.0, 1.0, 1.0, 2.0))
        term, _ = fit_error_term(obs, 0.0, 1.0, SpreadConfig(l_min=1.0, r_min=1.0))
        self.assertAlmostEqual(term.left, 1.0, places=12)
        self.assertAlmostEqual(term.right, 1.0, places=12)


class TestFitNonuniform(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.data = worked_example_observations()
        cls.model = fit_nonuniform(cls.data, 21, FAST)

    def test_worked_example_terms(self):
        for term in self.model.error_terms[:4]:
            self.assertAlmostEqual(term.left, 0.5, places=9)
            self.assertAlmostEqual(term.right, 0.5, places=9)
        last = self.model.error_terms[4]
        self.assertAlmostEqual(last.left + last.right, 5.0, delta=1e-9)

    def test_worked_example_discrepancies(self):
        expected = [0.36, 0.84, 0.84, 0.36, 0.0]
        for found, value in zip(self.model.per_obs_discrepancy, expected):
            self.assertAlmostEqual(found, value, delta=1e-6)
        self.assertAlmostEqual(self.model.total_discrepancy, 2.4, delta=1e-5)
        self.assertEqual(self.model.total_discrepancy, float(sum(self.model.per_obs_discrepancy)))

    def test_total_spread_matches_and_lower_bounds_hold(self):
        model = fit_nonuniform(FUZZY_X_DATA, 5, FAST)
        for obs, term in zip(FUZZY_X_DATA, model.error_terms):
            fitted = fitted_response(obs, model.b0_c, model.b1_c, term)
            self.assertAlmostEqual(fitted.total_spread, obs.y.total_spread, delta=1e-9)
            self.assertGreaterEqual(fitted.left_spread, model.spreads.l_min - 1e-12)
            self.assertGreaterEqual(fitted.right_spread, model.spreads.r_min - 1e-12)
            self.assertGreaterEqual(term.left, 0.0)
            self.assertGreaterEqual(term.right, 0.0)

    def test_crisp_line_needs_no_error(self):
        data = [FuzzyObservation(T.crisp(x), T.crisp(1.0 + 2.0 * x)) for x in (1.0, 2.0, 3.0, 4.0)]
        model = fit_nonuniform(data, 5, FAST)
        self.assertEqual((model.b0_c, model.b1_c), (1.0, 2.0))
        for term in model.error_terms:
            self.assertEqual((term.left, term.right), (0.0, 0.0))
        self.assertEqual(model.total_discrepancy, 0.0)

    def test_random_crisp_data_reduces_to_least_squares(self):
        rng = np.random.default_rng(301)
        for _ in range(200):
            n = int(rng.integers(2, 9))
            x = np.cumsum(rng.uniform(0.1, 2.0, size=n))
            y = rng.uniform(-10.0, 10.0, size=n)
            data = [FuzzyObservation(T.crisp(float(a)), T.crisp(float(b))) for a, b in zip(x, y)]
            model = fit_nonuniform(data, 3, FAST)
            ols_b0, ols_b1 = crisp_least_squares(x, y)
            self.assertAlmostEqual(model.b0_c, ols_b0, delta=1e-9)
            self.assertAlmostEqual(model.b1_c, ols_b1, delta=1e-9)
            for term in model.error_terms:
                self.assertEqual((term.left, term.right), (0.0, 0.0))
            self.assertEqual(model.total_discrepancy, 0.0)

    def test_fuzzy_x_with_default_settings(self):
        data = []
        for i, x in enumerate((1.0, 2.0, 3.0, 4.0, 5.0, 6.0)):
            y = 0.5 + 2.0 * x + (0.3 if i % 2 else -0.3)
            data.append(FuzzyObservation(T(x - 0.1, x, x, x + 0.1), T(y - 1.2, y - 0.1, y + 0.1, y + 1.0)))
        model = fit_nonuniform(data)
        self.assertEqual(len(model.b1_curve.levels), 21)
        for curve in (model.b0_curve, model.b1_curve):
            for lower, upper in zip(curve.levels[:-1], curve.levels[1:]):
                self.assertTrue(lower.cut.contains_interval(upper.cut))
        self.assertTrue(model.b1_curve.support.contains(model.b1_c))
        for obs, term in zip(data, model.error_terms):
            fitted = fitted_response(obs, model.b0_c, model.b1_c, term)
            self.assertAlmostEqual(fitted.total_spread, obs.y.total_spread, delta=1e-9)

    def test_fixed_seed_is_reproducible(self):
        again = fit_nonuniform(self.data, 21, FAST)
        self.assertEqual(again.error_terms, self.model.error_terms)
        self.assertEqual(again.per_obs_discrepancy, self.model.per_obs_discrepancy)


class TestUniformBaseline(unittest.TestCase):
    def test_worse_than_nonuniform_on_worked_example(self):
        data = worked_example_observations()
        model = fit_nonuniform(data, 21, FAST)
        baseline = fit_uniform_baseline(data, model.b0_c, model.b1_c)
        self.assertGreater(baseline.total, model.total_discrepancy)
        self.assertAlmostEqual(baseline.total, float(sum(baseline.per_obs)), places=12)

        shared = float(sum(evaluate_model(data, model.b0_c, model.b1_c, ErrorTerm(0.5, 0.5))))
        self.assertLessEqual(baseline.total, shared + 1e-9)

    def test_exact_shared_term_is_found(self):
        data = line_data(1.0, 2.0, 0.5)
        baseline = fit_uniform_baseline(data, 1.0, 2.0)
        self.assertLess(baseline.total, 1e-6)
        self.assertAlmostEqual(baseline.error_term.left, 0.5, places=4)
        self.assertAlmostEqual(baseline.error_term.right, 0.5, places=4)

    def test_tolerance_must_be_positive(self):
        with self.assertRaises(DomainError):
            fit_uniform_baseline(worked_example_observations(), 0.5, 2.2, tol=0.0)

    def test_crisp_data_gives_zero_term(self):
        data = [FuzzyObservation(T.crisp(x), T.crisp(3.0 * x)) for x in (1.0, 2.0, 3.0)]
        baseline = fit_uniform_baseline(data, 0.0, 3.0)
        self.assertEqual((baseline.error_term.left, baseline.error_term.right), (0.0, 0.0))
        self.assertEqual(baseline.total, 0.0)

    def test_published_coefficients(self):
        data = worked_example_observations()
        baseline = fit_uniform_baseline(data, 0.6, 2.4)
        no_error = float(sum(evaluate_model(data, 0.6, 2.4, ErrorTerm(0.0, 0.0))))
        self.assertTrue(np.isfinite(baseline.total))
        self.assertLessEqual(baseline.total, no_error + 1e-12)
        for obs, d in zip(data, baseline.per_obs):
            base = affine_image(obs.x, 2.4, 0.6)
            self.assertGreaterEqual(d, 0.0)
            self.assertLessEqual(d, obs.y.total_spread + base.total_spread
                                 + baseline.error_term.left + baseline.error_term.right)


if __name__ == '__main__':
    unittest.main()
