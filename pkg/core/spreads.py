"""Per-observation fuzzy error terms (non-uniform spreads) and the shared-term baseline."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .boxopt import OptimizerConfig
from .coeffs import FuzzyObservation, MembershipCurve, estimate_coefficient_curves
from .config import config
from .fuznum import DomainError, TrapezoidalFuzzyNumber, affine_image, discrepancy
from .search import golden_section, guarded_minimize
from .utils import FuzzyRegressionError

# Grid resolution per axis for the baseline's starting scan.
BASELINE_GRID_POINTS = 21
BASELINE_STARTS = 4
BASELINE_MAX_ROUNDS = 50


class ConstraintInfeasibilityError(FuzzyRegressionError):
    """Raised when no error term can match an observation's spread within the lower bounds."""

    def __init__(self, message: str, observation: Optional[int] = None):
        if observation is not None:
            message = f"Observation {observation + 1}: {message}"
        super().__init__(message)
        self.observation = observation


@dataclass(frozen=True)
class ErrorTerm:
    """The fuzzy error term (-left, 0, 0, right)."""
    left: float
    right: float

    def __post_init__(self):
        if not (self.left >= 0.0 and self.right >= 0.0):
            raise DomainError(f"Error term spreads must be non-negative, got ({self.left!r}, {self.right!r}).")

    def as_trapezoid(self) -> TrapezoidalFuzzyNumber:
        return TrapezoidalFuzzyNumber(-self.left, 0.0, 0.0, self.right)


@dataclass(frozen=True)
class SpreadConfig:
    """Lower bounds on the estimated left/right spreads and the line-search settings."""
    l_min: float = 0.0
    r_min: float = 0.0
    search_tol: float = field(default_factory=lambda: config.SEARCH_TOL)
    coarse_points: int = field(default_factory=lambda: config.COARSE_SCAN_POINTS)
    dense_points: int = field(default_factory=lambda: config.DENSE_SCAN_POINTS)

    def __post_init__(self):
        if self.l_min < 0 or self.r_min < 0:
            raise DomainError(f"l_min and r_min must be non-negative, got ({self.l_min}, {self.r_min}).")
        if self.search_tol <= 0:
            raise DomainError("search_tol must be positive.")

    @classmethod
    def for_data(cls, data: Sequence[FuzzyObservation], **overrides) -> 'SpreadConfig':
        """Lower bounds taken from the smallest observed spreads, unless overridden."""
        l_min, r_min = derive_min_spreads(data)
        values = {'l_min': l_min, 'r_min': r_min}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass
class FittedModel:
    """Crisp coefficients, their curves and one fitted error term per observation."""
    b0_c: float
    b1_c: float
    b0_curve: MembershipCurve
    b1_curve: MembershipCurve
    error_terms: List[ErrorTerm]
    per_obs_discrepancy: List[float]
    total_discrepancy: float
    observations: List[FuzzyObservation]
    alpha_levels: int
    optimizer: OptimizerConfig
    spreads: SpreadConfig

    def __post_init__(self):
        n = len(self.observations)
        if len(self.error_terms) != n or len(self.per_obs_discrepancy) != n:
            raise ValueError("Error terms, discrepancies and observations must have equal length.")


@dataclass
class UniformBaseline:
    """One error term shared by every observation, with the discrepancies it produces."""
    error_term: ErrorTerm
    per_obs: List[float]
    total: float


def derive_min_spreads(data: Sequence[FuzzyObservation]) -> Tuple[float, float]:
    """Smallest left and right spreads among the observed responses."""
    if not data:
        raise ValueError("At least one observation is required.")
    return (min(obs.y.left_spread for obs in data),
            min(obs.y.right_spread for obs in data))


def fitted_response(observation: FuzzyObservation, b0_c: float, b1_c: float,
                    term: ErrorTerm) -> TrapezoidalFuzzyNumber:
    """The estimated response b0 + b1 * x + (-l, 0, 0, r)."""
    base = affine_image(observation.x, b1_c, b0_c)
    return TrapezoidalFuzzyNumber(base.l - term.left, base.m1, base.m2, base.r + term.right)


def evaluate_model(data: Sequence[FuzzyObservation], b0_c: float, b1_c: float,
                   terms: Union[ErrorTerm, Sequence[ErrorTerm]]) -> List[float]:
    """Per-observation discrepancies of an arbitrary model; a single term is shared by all."""
    if isinstance(terms, ErrorTerm):
        terms = [terms] * len(data)
    if len(terms) != len(data):
        raise ValueError(f"Expected {len(data)} error terms, got {len(terms)}.")
    return [discrepancy(obs.y, fitted_response(obs, b0_c, b1_c, term)) for obs, term in zip(data, terms)]


def fit_error_term(observation: FuzzyObservation, b0_c: float, b1_c: float, cfg: SpreadConfig,
                   index: Optional[int] = None, verbose: bool = False) -> Tuple[ErrorTerm, float]:
    """
    Optimal (l, r) for one observation: minimize the discrepancy subject to the estimated total
    spread matching the observed one and each side meeting its lower bound. The equality pins
    l + r, leaving a line search over l.
    """
    base = affine_image(observation.x, b1_c, b0_c)
    slack_tol = 1e-12 * (1.0 + abs(observation.y.total_spread))

    target = observation.y.total_spread - base.total_spread
    if target < -slack_tol:
        raise ConstraintInfeasibilityError(
            f"propagated spread {base.total_spread:.6g} of b0 + b1*x already exceeds the observed "
            f"spread {observation.y.total_spread:.6g}.", index)
    target = max(target, 0.0)

    l_lo = max(0.0, cfg.l_min - base.left_spread)
    r_lo = max(0.0, cfg.r_min - base.right_spread)
    l_hi = target - r_lo
    if l_lo > l_hi + slack_tol:
        raise ConstraintInfeasibilityError(
            f"lower spread bounds need {l_lo + r_lo:.6g} but only {target:.6g} is available.", index)
    l_hi = max(l_hi, l_lo)

    def objective(left: float) -> float:
        estimated = TrapezoidalFuzzyNumber(base.l - left, base.m1, base.m2, base.r + (target - left))
        return discrepancy(observation.y, estimated)

    result = guarded_minimize(objective, l_lo, l_hi, cfg.search_tol, cfg.coarse_points, cfg.dense_points)
    if verbose and result.used_fallback:
        label = f"observation {index + 1}" if index is not None else "observation"
        print(f"INFO: {label}: golden-section beaten by the scan, dense fallback used.")

    left = min(max(result.x, l_lo), l_hi)
    term = ErrorTerm(left, max(target - left, 0.0))
    return term, objective(left)


def fit_nonuniform(data: Sequence[FuzzyObservation], alpha_levels: Optional[int] = None,
                   opt: Optional[OptimizerConfig] = None, spread_config: Optional[SpreadConfig] = None,
                   verbose: bool = False) -> FittedModel:
    """
    Runs the full method: coefficient curves, COA crisp coefficients, then one error term per
    observation. Lower spread bounds default to the smallest observed spreads.
    """
    if alpha_levels is None:
        alpha_levels = config.ALPHA_LEVELS
    opt = opt or OptimizerConfig.from_config()
    spread_config = spread_config or SpreadConfig.for_data(data)

    b0, b1 = estimate_coefficient_curves(data, alpha_levels, opt, verbose=verbose)
    if verbose:
        print(f"INFO: crisp coefficients b0 = {b0.crisp:.10g}, b1 = {b1.crisp:.10g}")

    terms: List[ErrorTerm] = []
    per_obs: List[float] = []
    for i, obs in enumerate(data):
        term, d = fit_error_term(obs, b0.crisp, b1.crisp, spread_config, index=i, verbose=verbose)
        terms.append(term)
        per_obs.append(d)

    return FittedModel(
        b0_c=b0.crisp,
        b1_c=b1.crisp,
        b0_curve=b0.curve,
        b1_curve=b1.curve,
        error_terms=terms,
        per_obs_discrepancy=per_obs,
        total_discrepancy=float(sum(per_obs)),
        observations=list(data),
        alpha_levels=alpha_levels,
        optimizer=opt,
        spreads=spread_config,
    )


def fit_uniform_baseline(data: Sequence[FuzzyObservation], b0_c: float, b1_c: float,
                         tol: Optional[float] = None) -> UniformBaseline:
    """
    Two-stage baseline: a single shared error term (l, r) minimizing the total discrepancy,
    with no spread-matching constraint. A grid scan over [0, S]^2 (S the widest observed spread)
    picks the starts; alternating golden-section steps refine each one.
    """
    if tol is None:
        tol = config.SEARCH_TOL
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol!r}.")
    bases = [affine_image(obs.x, b1_c, b0_c) for obs in data]
    widest = max(obs.y.total_spread for obs in data)

    def total(left: float, right: float) -> float:
        return sum(discrepancy(obs.y, TrapezoidalFuzzyNumber(base.l - left, base.m1, base.m2, base.r + right))
                   for obs, base in zip(data, bases))

    if widest == 0.0:
        best = (0.0, 0.0)
    else:
        grid = np.linspace(0.0, widest, BASELINE_GRID_POINTS)
        cell = grid[1] - grid[0]
        scores = np.array([[total(float(l), float(r)) for r in grid] for l in grid])
        # Stable sort keeps row-major order among equal scores.
        order = np.argsort(scores, axis=None, kind='stable')[:BASELINE_STARTS]

        best, best_value = None, None
        for flat in order:
            i, j = np.unravel_index(flat, scores.shape)
            left, right = float(grid[i]), float(grid[j])
            value = float(scores[i, j])
            for _ in range(BASELINE_MAX_ROUNDS):
                previous = value
                t, v = golden_section(lambda t: total(t, right),
                                      max(0.0, left - cell), min(widest, left + cell), tol)
                if v < value:
                    left, value = t, v
                t, v = golden_section(lambda t: total(left, t),
                                      max(0.0, right - cell), min(widest, right + cell), tol)
                if v < value:
                    right, value = t, v
                if previous - value <= tol:
                    break
            if best_value is None or value < best_value:
                best, best_value = (left, right), value

    term = ErrorTerm(*best)
    per_obs = evaluate_model(data, b0_c, b1_c, term)
    return UniformBaseline(term, per_obs, float(sum(per_obs)))
