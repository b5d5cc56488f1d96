"""Takagi-Sugeno style forecasting of the error term for new explanatory values."""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .coeffs import FuzzyObservation
from .config import config
from .fuznum import (DomainError, TrapezoidalFuzzyNumber, add, affine_image, coa_from_samples, membership,
                     membership_array)
from .spreads import ErrorTerm, FittedModel
from .utils import FuzzyRegressionError


class InvalidModelError(FuzzyRegressionError):
    """Raised when a fitted model cannot back a rule base."""
    pass


@dataclass(frozen=True)
class Rule:
    """If the estimate is `antecedent`, then the error term is `consequent`."""
    antecedent: TrapezoidalFuzzyNumber
    consequent: ErrorTerm


@dataclass(frozen=True)
class RuleBase:
    rules: Tuple[Rule, ...]

    def __post_init__(self):
        if not self.rules:
            raise InvalidModelError("A rule base needs at least one rule.")

    def __len__(self) -> int:
        return len(self.rules)


@dataclass
class ForecastResult:
    crisp_core: float
    error_term: TrapezoidalFuzzyNumber
    response: TrapezoidalFuzzyNumber
    activations: List[Tuple[int, float]]


def build_rule_base(model: FittedModel, data: Optional[Sequence[FuzzyObservation]] = None) -> RuleBase:
    """One rule per fitted observation, in observation order. Defaults to the model's own data."""
    data = model.observations if data is None else data
    if len(data) != len(model.error_terms):
        raise InvalidModelError(
            f"Model has {len(model.error_terms)} error terms but {len(data)} observations were given.")
    if not data:
        raise InvalidModelError("Model has no fitted observations.")
    return RuleBase(tuple(Rule(obs.y, term) for obs, term in zip(data, model.error_terms)))


def activate(rules: RuleBase, crisp_estimate: float) -> List[Tuple[int, float]]:
    """
    Activation weight of each rule: membership of the estimate in the rule's observed response.
    Outside every support, the two rules with the nearest support boundary fire instead, with
    weights proportional to inverse distance and summing to 1.
    """
    weights = [membership(rule.antecedent, crisp_estimate) for rule in rules.rules]
    if any(w > 0.0 for w in weights):
        return list(enumerate(weights))

    distances = [min(abs(crisp_estimate - rule.antecedent.l), abs(crisp_estimate - rule.antecedent.r))
                 for rule in rules.rules]
    # Stable: nearer first, lower index first among ties.
    nearest = sorted(range(len(distances)), key=lambda i: (distances[i], i))[:2]

    fallback = [0.0] * len(weights)
    touching = [i for i in nearest if distances[i] == 0.0]
    if touching:
        for i in touching:
            fallback[i] = 1.0 / len(touching)
    else:
        inverse = {i: 1.0 / distances[i] for i in nearest}
        norm = sum(inverse.values())
        for i, value in inverse.items():
            fallback[i] = value / norm
    return list(enumerate(fallback))


def _aggregate_error(rules: RuleBase, activations: List[Tuple[int, float]],
                     grid_points: int) -> TrapezoidalFuzzyNumber:
    """
    Max-min union of the activated consequents, each clipped at its weight, turned into a
    trapezoid: support from the extreme consequent endpoints, core at the union's centroid.
    """
    fired = [(rules.rules[i].consequent.as_trapezoid(), w) for i, w in activations if w > 0.0]
    lo = min(term.l for term, _ in fired)
    hi = max(term.r for term, _ in fired)
    if hi == lo:
        return TrapezoidalFuzzyNumber(lo, lo, lo, lo)

    z = np.linspace(lo, hi, grid_points)
    mu = np.zeros_like(z)
    for term, w in fired:
        mu = np.maximum(mu, np.minimum(w, membership_array(term, z)))
    center = coa_from_samples(z, mu)
    center = min(max(center, lo), hi)
    return TrapezoidalFuzzyNumber(lo, center, center, hi)


def predict(model: FittedModel, rules: RuleBase, x_new: TrapezoidalFuzzyNumber,
            grid_points: Optional[int] = None) -> ForecastResult:
    """Forecast the trapezoidal response for `x_new`."""
    if not rules.rules:
        raise InvalidModelError("Cannot predict with an empty rule base.")
    if grid_points is None:
        grid_points = config.FORECAST_GRID_POINTS
    if grid_points < 2:
        raise DomainError(f"grid_points must be at least 2, got {grid_points}.")

    crisp_core = model.b0_c + model.b1_c * x_new.core_midpoint
    activations = activate(rules, crisp_core)
    error = _aggregate_error(rules, activations, grid_points)
    response = add(affine_image(x_new, model.b1_c, model.b0_c), error)
    return ForecastResult(crisp_core, error, response, activations)


def predict_many(model: FittedModel, rules: RuleBase,
                 xs: Sequence[TrapezoidalFuzzyNumber]) -> List[ForecastResult]:
    return [predict(model, rules, x) for x in xs]
