"""Command-line interface for fitting, forecasting and reporting."""

import re
import sys
from typing import List, Optional, Sequence, Tuple

from core.boxopt import IllPosedProblemError, OptimizerConfig
from core.coeffs import FuzzyObservation, MembershipCurve, alpha_grid
from core.config import config
from core.forecast import InvalidModelError, build_rule_base, predict_many
from core.fuznum import DegenerateMembershipError, DomainError, TrapezoidalFuzzyNumber
from core.model_store import (DatasetParseError, DatasetValidationError, ModelFileError, load_dataset,
                              load_model, save_model)
from core import reference_values as ref
from core.spreads import (ConstraintInfeasibilityError, ErrorTerm, FittedModel, SpreadConfig, UniformBaseline,
                          evaluate_model, fit_nonuniform, fit_uniform_baseline)
from core.utils import closest_match, format_number, format_trapezoid

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_ILL_POSED = 4
EXIT_INFEASIBLE = 5
EXIT_IO = 6

# Checked in order; the first matching class decides the category and exit code.
ERROR_CATEGORIES = [
    (DatasetParseError, "parse", EXIT_PARSE),
    (ModelFileError, "parse", EXIT_PARSE),
    (DatasetValidationError, "validation", EXIT_VALIDATION),
    (InvalidModelError, "validation", EXIT_VALIDATION),
    (DomainError, "validation", EXIT_VALIDATION),
    (IllPosedProblemError, "ill-posed", EXIT_ILL_POSED),
    (DegenerateMembershipError, "ill-posed", EXIT_ILL_POSED),
    (ConstraintInfeasibilityError, "infeasible", EXIT_INFEASIBLE),
    (OSError, "io", EXIT_IO),
]

COEFFICIENT_NAMES = ["b0", "b1"]


class CLIApp:
    """Runs one CLI command and turns library errors into exit codes."""

    def __init__(self, verbose: bool = False, out=None, err=None):
        self.verbose = verbose
        self.out = out or sys.stdout
        self.err = err or sys.stderr

    def _print(self, text: str = "") -> None:
        print(text, file=self.out)

    def run(self, command: str, **kwargs) -> int:
        """Dispatches `command` ('fit', 'predict', 'curve', 'report') and returns the exit code."""
        handler = getattr(self, f"cmd_{command}")
        try:
            handler(**kwargs)
            return EXIT_OK
        except Exception as e:
            for error_class, category, code in ERROR_CATEGORIES:
                if isinstance(e, error_class):
                    print(f"ERROR: {category}: {e}", file=self.err)
                    return code
            raise

    # --- fit -----------------------------------------------------------------

    def cmd_fit(self, input_path: str, output_path: str, alpha_levels: Optional[int] = None,
                seed: Optional[int] = None, l_min: Optional[float] = None, r_min: Optional[float] = None,
                multistart: Optional[int] = None) -> Tuple[FittedModel, UniformBaseline]:
        """Fits the non-uniform model and the shared-term baseline, saves the model, prints a summary."""
        data = load_dataset(input_path, verbose=self.verbose)
        opt = OptimizerConfig.from_config(rng_seed=seed, multistart_count=multistart)
        spread_config = SpreadConfig.for_data(data, l_min=l_min, r_min=r_min)

        if alpha_levels is None:
            alpha_levels = config.ALPHA_LEVELS
        model = fit_nonuniform(data, alpha_levels, opt, spread_config, verbose=self.verbose)
        baseline = fit_uniform_baseline(data, model.b0_c, model.b1_c)
        save_model(output_path, model, baseline, verbose=self.verbose)

        self._print_summary(model, baseline)
        self._print(f"\nModel written to {output_path}")
        return model, baseline

    def _print_summary(self, model: FittedModel, baseline: UniformBaseline) -> None:
        self._print("=" * 60)
        self._print("FITTED MODEL")
        self._print("=" * 60)
        self._print(f"b0 (COA) = {model.b0_c:.10g}   support [{model.b0_curve.support.lo:.6g}, "
                    f"{model.b0_curve.support.hi:.6g}], core [{model.b0_curve.core.lo:.6g}, {model.b0_curve.core.hi:.6g}]")
        self._print(f"b1 (COA) = {model.b1_c:.10g}   support [{model.b1_curve.support.lo:.6g}, "
                    f"{model.b1_curve.support.hi:.6g}], core [{model.b1_curve.core.lo:.6g}, {model.b1_curve.core.hi:.6g}]")
        self._print(f"Spread lower bounds: l_min = {model.spreads.l_min:.6g}, r_min = {model.spreads.r_min:.6g}")
        self._print()
        self._print(f"{'Obs':>4} {'l*':>10} {'r*':>10} {'D (non-uniform)':>16} {'D (baseline)':>14}")
        self._print("-" * 60)
        for i, (term, d, d_base) in enumerate(zip(model.error_terms, model.per_obs_discrepancy, baseline.per_obs), 1):
            self._print(f"{i:>4} {format_number(term.left, 10)} {format_number(term.right, 10)} "
                        f"{format_number(d, 16)} {format_number(d_base, 14)}")
        self._print("-" * 60)
        self._print(f"{'Total':>26} {format_number(model.total_discrepancy, 16)} {format_number(baseline.total, 14)}")
        self._print(f"Baseline shared error term: (-{baseline.error_term.left:.6g}, 0, 0, {baseline.error_term.right:.6g})")

    # --- predict -------------------------------------------------------------

    @staticmethod
    def parse_x(text: str) -> TrapezoidalFuzzyNumber:
        """Parses 'a' or 'a,b,c,d' (commas or spaces); a single value becomes a crisp trapezoid."""
        parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise DatasetParseError(f"--x must be one number or four numbers, got '{text}'.", column="x")
        if len(values) == 1:
            return TrapezoidalFuzzyNumber.crisp(values[0])
        if len(values) != 4:
            raise DatasetParseError(f"--x needs 1 or 4 values, got {len(values)}.", column="x")
        return TrapezoidalFuzzyNumber(*values)

    def cmd_predict(self, model_path: str, xs: Sequence[str]):
        """Forecasts the response for each x and prints the trapezoid, error term and fired rules."""
        x_values = [self.parse_x(x) for x in xs]
        model, _ = load_model(model_path, verbose=self.verbose)
        rules = build_rule_base(model)
        results = predict_many(model, rules, x_values)

        for n, (x_new, result) in enumerate(zip(x_values, results)):
            if n:
                self._print()
            self._print(f"x           = {format_trapezoid(x_new.as_tuple(), 6)}")
            self._print(f"crisp core  = {result.crisp_core:.10g}")
            self._print(f"error term  = {format_trapezoid(result.error_term.as_tuple(), 6)}")
            self._print(f"response    = {format_trapezoid(result.response.as_tuple(), 6)}")
            self._print("activated rules:")
            for index, weight in result.activations:
                if weight > 0.0:
                    term = rules.rules[index].consequent
                    self._print(f"  rule {index + 1}: weight {weight:.6f}, "
                                f"error term (-{term.left:.6g}, 0, 0, {term.right:.6g})")
        return results

    # --- curve ---------------------------------------------------------------

    def cmd_curve(self, model_path: str, coefficient: str, output_path: Optional[str] = None,
                  levels: Optional[int] = None) -> MembershipCurve:
        """
        Emits the sampled membership curve of one coefficient as alpha,lo,hi CSV.
        With `levels`, the cuts are interpolated onto that many evenly spaced alpha levels.
        """
        name = coefficient.strip().lower()
        if name not in COEFFICIENT_NAMES:
            hint = closest_match(name, COEFFICIENT_NAMES)
            suggestion = f" Did you mean '{hint}'?" if hint else ""
            raise DomainError(f"Unknown coefficient '{coefficient}'; choose b0 or b1.{suggestion}")
        model, _ = load_model(model_path, verbose=self.verbose)
        curve = model.b0_curve if name == "b0" else model.b1_curve

        if levels is None:
            rows = [(level.alpha, level.cut) for level in curve.levels]
        else:
            rows = [(float(alpha), curve.cut_at(float(alpha))) for alpha in alpha_grid(levels)]
        lines = ["alpha,lo,hi"] + [f"{alpha!r},{cut.lo!r},{cut.hi!r}" for alpha, cut in rows]
        text = "\n".join(lines) + "\n"
        if output_path:
            with open(output_path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(text)
            if self.verbose:
                print(f"INFO: Curve written to '{output_path}'.")
        else:
            self.out.write(text)
        return curve

    # --- report --------------------------------------------------------------

    def cmd_report(self, input_path: str, model_path: str) -> None:
        """Side-by-side table of the non-uniform model and the shared-term baseline."""
        data = load_dataset(input_path, verbose=self.verbose)
        model, baseline = load_model(model_path, verbose=self.verbose)
        if len(data) != len(model.error_terms):
            raise InvalidModelError(
                f"Model was fitted on {len(model.error_terms)} observations but the input has {len(data)}.")

        non_uniform = evaluate_model(data, model.b0_c, model.b1_c, model.error_terms)
        if baseline is None:
            baseline = fit_uniform_baseline(data, model.b0_c, model.b1_c)
        else:
            per_obs = evaluate_model(data, model.b0_c, model.b1_c, baseline.error_term)
            baseline = UniformBaseline(baseline.error_term, per_obs, float(sum(per_obs)))

        self._print("=" * 72)
        self._print("ESTIMATION ERRORS")
        self._print("=" * 72)
        self._print(f"Model: y = {model.b0_c:.6g} + {model.b1_c:.6g} x + E_i")
        self._print()
        self._print(f"{'Obs':>4}  {'x':<26} {'y':<30} {'Baseline':>9} {'Non-unif.':>10}")
        for i, obs in enumerate(data):
            self._print(f"{i + 1:>4}  {format_trapezoid(obs.x.as_tuple()):<26} {format_trapezoid(obs.y.as_tuple()):<30} "
                        f"{format_number(baseline.per_obs[i], 9)} {format_number(non_uniform[i], 10)}")
        self._print(f"{'Total':>63} {format_number(baseline.total, 9)} {format_number(sum(non_uniform), 10)}")
        better = "non-uniform" if sum(non_uniform) < baseline.total else "baseline"
        self._print(f"Lower total discrepancy: {better}")

        if ref.matches_worked_example(data):
            self._print_reference_comparison(data, model, baseline, non_uniform)

    def _print_reference_comparison(self, data: Sequence[FuzzyObservation], model: FittedModel,
                                    baseline: UniformBaseline, non_uniform: List[float]) -> None:
        """Computed values next to the published ones, with each divergence flagged."""
        forced = fit_uniform_baseline(data, ref.PRINTED_B0, ref.PRINTED_B1)
        printed_nus = evaluate_model(data, ref.PRINTED_B0, ref.PRINTED_B1,
                                     [ErrorTerm(l, r) for l, r in ref.PRINTED_NON_UNIFORM_TERMS])
        printed_two_stage = evaluate_model(data, ref.PRINTED_B0, ref.PRINTED_B1, ErrorTerm(*ref.PRINTED_TWO_STAGE_TERM))

        self._print()
        self._print("=" * 72)
        self._print("COMPARISON WITH THE PUBLISHED WORKED EXAMPLE")
        self._print("=" * 72)
        self._print(f"Coefficients: computed b0 = {model.b0_c:.6g}, b1 = {model.b1_c:.6g}; "
                    f"published b0 = {ref.PRINTED_B0}, b1 = {ref.PRINTED_B1}")
        self._print(f"b1 curve: computed support [{model.b1_curve.support.lo:.6g}, {model.b1_curve.support.hi:.6g}] "
                    f"peak {model.b1_curve.core.midpoint:.6g}; published support "
                    f"[{ref.PRINTED_B1_CURVE[0]}, {ref.PRINTED_B1_CURVE[2]}] peak {ref.PRINTED_B1_CURVE[1]}")
        self._print(f"b0 curve: computed support [{model.b0_curve.support.lo:.6g}, {model.b0_curve.support.hi:.6g}] "
                    f"peak {model.b0_curve.core.midpoint:.6g}; published support "
                    f"[{ref.PRINTED_B0_CURVE[0]}, {ref.PRINTED_B0_CURVE[2]}] peak {ref.PRINTED_B0_CURVE[1]}")
        self._print(f"Shared term with the published coefficients: "
                    f"(-{forced.error_term.left:.4g}, 0, 0, {forced.error_term.right:.4g}); "
                    f"published (-{ref.PRINTED_TWO_STAGE_TERM[0]}, 0, 0, {ref.PRINTED_TWO_STAGE_TERM[1]})")
        self._print()

        self._print_reference_table("Two-stage", [
            ("pipeline", baseline.per_obs),
            ("0.6+2.4x fit", forced.per_obs),
            ("printed model", printed_two_stage),
        ], ref.PRINTED_TWO_STAGE_ERRORS, ref.PRINTED_TWO_STAGE_TOTAL)
        self._print()
        self._print_reference_table("Non-uniform", [
            ("pipeline", non_uniform),
            ("printed model", printed_nus),
        ], ref.PRINTED_NON_UNIFORM_ERRORS, ref.PRINTED_NON_UNIFORM_TOTAL)

    def _print_reference_table(self, title: str, columns: List[Tuple[str, List[float]]],
                               published: List[float], published_total: float) -> None:
        header = f"{title:<12}" + "".join(f"{name:>15}" for name, _ in columns) + f"{'published':>11}  flag"
        self._print(header)
        self._print("-" * len(header))
        rows = [(f"obs {i + 1}", [values[i] for _, values in columns], published[i]) for i in range(len(published))]
        rows.append(("total", [float(sum(values)) for _, values in columns], published_total))
        for label, computed, printed in rows:
            # The pipeline column decides the flag; the others show where the gap comes from.
            diverges = abs(computed[0] - printed) > config.DIVERGENCE_TOL
            flag = "DIVERGES" if diverges else "ok"
            self._print(f"{label:<12}" + "".join(format_number(v, 15) for v in computed)
                        + f"{format_number(printed, 11)}  {flag}")
