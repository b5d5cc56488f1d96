"""Membership curves of the regression coefficients and their crisp (COA) values."""

import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .boxopt import BoxProblem, IllPosedProblemError, Objective, OptimizerConfig, Sense, solve_box
from .config import config
from .fuznum import DomainError, Interval, TrapezoidalFuzzyNumber, alpha_cut, coa_defuzzify


@dataclass(frozen=True)
class FuzzyObservation:
    """One (x, y) pair of fuzzy observations."""
    x: TrapezoidalFuzzyNumber
    y: TrapezoidalFuzzyNumber


@dataclass(frozen=True)
class CurveLevel:
    alpha: float
    cut: Interval


@dataclass(frozen=True)
class MembershipCurve:
    """
    A fuzzy coefficient sampled by its alpha-cuts. Alphas rise strictly from 0 to 1 and the
    cuts are nested; between samples the cut endpoints are interpolated linearly in alpha.
    """
    levels: Tuple[CurveLevel, ...]

    def __post_init__(self):
        if len(self.levels) < 2:
            raise DomainError("A membership curve needs at least two alpha levels.")
        alphas = [level.alpha for level in self.levels]
        if alphas[0] != 0.0 or alphas[-1] != 1.0:
            raise DomainError(f"Alpha levels must start at 0 and end at 1, got {alphas[0]} .. {alphas[-1]}.")
        for lower, upper in zip(self.levels[:-1], self.levels[1:]):
            if not lower.alpha < upper.alpha:
                raise DomainError("Alpha levels must be strictly increasing.")
            if not lower.cut.contains_interval(upper.cut):
                raise DomainError(f"Cut at alpha {upper.alpha:g} is not nested in the cut at alpha {lower.alpha:g}.")

    @classmethod
    def from_bounds(cls, alphas: Sequence[float], lo: Sequence[float], hi: Sequence[float]) -> 'MembershipCurve':
        return cls(tuple(CurveLevel(float(a), Interval(float(l), float(h))) for a, l, h in zip(alphas, lo, hi)))

    def boundary_arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Returns (alphas, lower bounds, upper bounds) as arrays."""
        alphas = np.array([level.alpha for level in self.levels])
        lo = np.array([level.cut.lo for level in self.levels])
        hi = np.array([level.cut.hi for level in self.levels])
        return alphas, lo, hi

    @property
    def support(self) -> Interval:
        return self.levels[0].cut

    @property
    def core(self) -> Interval:
        return self.levels[-1].cut

    @property
    def is_crisp(self) -> bool:
        return self.support.width == 0.0

    def cut_at(self, alpha: float) -> Interval:
        """The cut at any alpha, interpolated between sampled levels."""
        if not 0.0 <= alpha <= 1.0:
            raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}.")
        alphas, lo, hi = self.boundary_arrays()
        return Interval(float(np.interp(alpha, alphas, lo)), float(np.interp(alpha, alphas, hi)))

    def membership(self, z: float) -> float:
        """Membership of z under the piecewise-linear reconstruction of the curve."""
        alphas, lo, hi = self.boundary_arrays()
        if z < lo[0] or z > hi[0]:
            return 0.0
        if lo[-1] <= z <= hi[-1]:
            return 1.0
        if z < lo[-1]:
            # Largest sampled level whose cut still reaches z, then interpolate to the next one.
            k = int(np.searchsorted(lo, z, side='right')) - 1
            return float(alphas[k] + (z - lo[k]) / (lo[k + 1] - lo[k]) * (alphas[k + 1] - alphas[k]))
        neg_hi = -hi
        k = int(np.searchsorted(neg_hi, -z, side='right')) - 1
        return float(alphas[k] + (-z - neg_hi[k]) / (neg_hi[k + 1] - neg_hi[k]) * (alphas[k + 1] - alphas[k]))


@dataclass(frozen=True)
class NestingRepair:
    """A cut endpoint moved to restore nesting: side is 'lo', 'hi' or 'crossed'."""
    alpha: float
    side: str
    amount: float


@dataclass
class CoefficientEstimate:
    curve: MembershipCurve
    crisp: float
    repairs: List[NestingRepair] = field(default_factory=list)


def alpha_grid(levels: int) -> np.ndarray:
    """Uniform alpha grid {0, 1/(L-1), ..., 1}."""
    if levels < 2:
        raise DomainError(f"At least two alpha levels are required, got {levels}.")
    return np.linspace(0.0, 1.0, levels)


def crisp_least_squares(x: Sequence[float], y: Sequence[float]) -> Tuple[float, float]:
    """Ordinary least-squares (b0, b1) for crisp data."""
    x_arr = np.asarray(x, dtype=float)
    y_arr = np.asarray(y, dtype=float)
    if len(x_arr) != len(y_arr):
        raise ValueError(f"x and y differ in length ({len(x_arr)} vs {len(y_arr)}).")
    if len(x_arr) < 2:
        raise IllPosedProblemError("At least two observations are required.")
    if np.all(x_arr == x_arr[0]):
        raise IllPosedProblemError("All x values are equal; the slope is undefined.")
    x_bar = x_arr.mean()
    y_bar = y_arr.mean()
    dev = x_arr - x_bar
    b1 = float(np.sum(dev * (y_arr - y_bar)) / np.sum(dev * dev))
    b0 = float(y_bar - b1 * x_bar)
    return b0, b1


def _repair_nesting(alphas: np.ndarray, lo: np.ndarray, hi: np.ndarray, label: str,
                    verbose: bool) -> List[NestingRepair]:
    """Sweeps alpha from 1 down to 0 widening cuts that are not nested in their successor."""
    repairs: List[NestingRepair] = []
    for k in range(len(alphas) - 1, -1, -1):
        if lo[k] > hi[k]:
            mid = 0.5 * (lo[k] + hi[k])
            repairs.append(NestingRepair(float(alphas[k]), 'crossed', float(lo[k] - hi[k])))
            lo[k] = hi[k] = mid
        if k == len(alphas) - 1:
            continue
        if lo[k] > lo[k + 1]:
            repairs.append(NestingRepair(float(alphas[k]), 'lo', float(lo[k] - lo[k + 1])))
            lo[k] = lo[k + 1]
        if hi[k] < hi[k + 1]:
            repairs.append(NestingRepair(float(alphas[k]), 'hi', float(hi[k + 1] - hi[k])))
            hi[k] = hi[k + 1]

    for repair in repairs:
        if repair.amount > config.NESTING_WARN_TOL:
            print(f"WARNING: {label} cut at alpha {repair.alpha:g} widened by {repair.amount:.3g} "
                  f"({repair.side}) to keep the curve nested; the box optimizer may have missed an optimum.",
                  file=sys.stderr)
        elif verbose:
            print(f"INFO: {label} cut at alpha {repair.alpha:g} adjusted by {repair.amount:.3g} ({repair.side}).")
    return repairs


def _crisp_value(curve: MembershipCurve) -> float:
    if curve.is_crisp:
        return curve.support.lo
    return coa_defuzzify(curve)


def estimate_coefficient_curves(data: Sequence[FuzzyObservation], alpha_levels: Optional[int] = None,
                                opt: Optional[OptimizerConfig] = None,
                                verbose: bool = False) -> Tuple[CoefficientEstimate, CoefficientEstimate]:
    """
    Builds the membership curves of b0 and b1 on a uniform alpha grid and defuzzifies them.
    Each level solves four box problems (min/max of each coefficient over the alpha-cut box).
    """
    if len(data) < 2:
        raise IllPosedProblemError("At least two observations are required.")
    if alpha_levels is None:
        alpha_levels = config.ALPHA_LEVELS
    opt = opt or OptimizerConfig.from_config()
    alphas = alpha_grid(alpha_levels)

    b0_lo, b0_hi = np.empty(alpha_levels), np.empty(alpha_levels)
    b1_lo, b1_hi = np.empty(alpha_levels), np.empty(alpha_levels)
    for k, alpha in enumerate(alphas):
        alpha = float(alpha)
        x_bounds = [alpha_cut(obs.x, alpha) for obs in data]
        y_bounds = [alpha_cut(obs.y, alpha) for obs in data]

        if all(b.width == 0.0 for b in x_bounds) and all(b.width == 0.0 for b in y_bounds):
            # A zero-volume box: evaluate the estimators directly.
            try:
                b0, b1 = crisp_least_squares([b.lo for b in x_bounds], [b.lo for b in y_bounds])
            except IllPosedProblemError as e:
                raise IllPosedProblemError(str(e), alpha) from e
            b0_lo[k] = b0_hi[k] = b0
            b1_lo[k] = b1_hi[k] = b1
        else:
            def solve(objective: Objective, sense: Sense) -> float:
                return solve_box(BoxProblem(x_bounds, y_bounds, objective, sense, alpha), opt)

            b1_lo[k] = solve(Objective.SLOPE_B1, Sense.MINIMIZE)
            b1_hi[k] = solve(Objective.SLOPE_B1, Sense.MAXIMIZE)
            b0_lo[k] = solve(Objective.INTERCEPT_B0, Sense.MINIMIZE)
            b0_hi[k] = solve(Objective.INTERCEPT_B0, Sense.MAXIMIZE)

        if verbose:
            print(f"INFO: alpha {alpha:.4f}: b0 in [{b0_lo[k]:.6g}, {b0_hi[k]:.6g}], "
                  f"b1 in [{b1_lo[k]:.6g}, {b1_hi[k]:.6g}]")

    b0_repairs = _repair_nesting(alphas, b0_lo, b0_hi, "b0", verbose)
    b1_repairs = _repair_nesting(alphas, b1_lo, b1_hi, "b1", verbose)

    b0_curve = MembershipCurve.from_bounds(alphas, b0_lo, b0_hi)
    b1_curve = MembershipCurve.from_bounds(alphas, b1_lo, b1_hi)
    return (CoefficientEstimate(b0_curve, _crisp_value(b0_curve), b0_repairs),
            CoefficientEstimate(b1_curve, _crisp_value(b1_curve), b1_repairs))
