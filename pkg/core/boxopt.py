"""Bound-constrained optimization of the least-squares coefficient functionals over alpha-cut boxes."""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .config import config
from .fuznum import DomainError, Interval
from .utils import FuzzyRegressionError

# Vertex starts are enumerated exhaustively up to this many observations.
MAX_EXHAUSTIVE_VERTICES = 10
# Points per pass of the zooming line scan.
LINE_SCAN_POINTS = 41
# Starts that go on to the coordinate search after all starts are scored.
REFINED_STARTS = 8


class IllPosedProblemError(FuzzyRegressionError):
    """Raised when the slope denominator sum((x_i - x_bar)^2) can vanish."""

    def __init__(self, message: str, alpha: Optional[float] = None):
        if alpha is not None:
            message = f"{message} (alpha level {alpha:g})"
        super().__init__(message)
        self.alpha = alpha


class Objective(Enum):
    SLOPE_B1 = "b1"
    INTERCEPT_B0 = "b0"


class Sense(Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings for the multistart projected search."""
    multistart_count: int = 32
    max_iterations: int = 500
    convergence_tol: float = 1e-9
    rng_seed: int = 0

    def __post_init__(self):
        if self.multistart_count < 1 or self.max_iterations < 1:
            raise DomainError(f"multistart_count and max_iterations must be positive, got "
                              f"{self.multistart_count} and {self.max_iterations}.")
        if self.convergence_tol <= 0:
            raise DomainError(f"convergence_tol must be positive, got {self.convergence_tol!r}.")

    @classmethod
    def from_config(cls, **overrides) -> 'OptimizerConfig':
        """Builds an OptimizerConfig from the global settings, with keyword overrides."""
        values = {
            'multistart_count': config.MULTISTART_COUNT,
            'max_iterations': config.MAX_ITERATIONS,
            'convergence_tol': config.CONVERGENCE_TOL,
            'rng_seed': config.RNG_SEED,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


@dataclass(frozen=True)
class BoxProblem:
    """Optimize b1 or b0 over x_i in x_bounds[i] and y_i in y_bounds[i]."""
    x_bounds: Sequence[Interval]
    y_bounds: Sequence[Interval]
    objective: Objective
    sense: Sense
    alpha: Optional[float] = None

    def __post_init__(self):
        if len(self.x_bounds) != len(self.y_bounds):
            raise ValueError(f"x_bounds and y_bounds differ in length ({len(self.x_bounds)} vs {len(self.y_bounds)}).")
        if len(self.x_bounds) < 2:
            raise IllPosedProblemError("At least two observations are required.", self.alpha)


def _y_coefficients(x: np.ndarray, objective: Objective) -> np.ndarray:
    """
    Coefficients c with objective = sum(c_i * y_i) for fixed x (rows of a 2-D x are independent).
    b1 has c_i = (x_i - x_bar) / Sxx, b0 has c_i = 1/n - x_bar (x_i - x_bar) / Sxx.
    """
    n = x.shape[-1]
    x_bar = x.mean(axis=-1, keepdims=True)
    dev = x - x_bar
    sxx = np.sum(dev * dev, axis=-1, keepdims=True)
    slope_coef = dev / sxx
    if objective is Objective.SLOPE_B1:
        return slope_coef
    return 1.0 / n - x_bar * slope_coef


def _sign_with_zero(coef: np.ndarray) -> np.ndarray:
    """np.sign, with coefficients that are zero up to rounding mapped to 0."""
    scale = np.max(np.abs(coef), axis=-1, keepdims=True)
    signs = np.sign(coef)
    signs[np.abs(coef) <= 1e-14 * scale] = 0.0
    return signs


def affine_reduction_signs(x: Sequence[float], objective: Objective) -> List[int]:
    """
    Sign of d(objective)/d(y_i) for each observation at fixed x.
    Both objectives are affine in y, so these signs decide the optimal y vertex.
    """
    x_arr = np.asarray(x, dtype=float)
    if len(x_arr) < 2 or np.all(x_arr == x_arr[0]):
        raise IllPosedProblemError("All x values are equal; the slope is undefined.")
    return [int(s) for s in _sign_with_zero(_y_coefficients(x_arr, objective))]


class _BoxEvaluator:
    """Evaluates the y-optimal objective for batches of x vectors."""

    def __init__(self, problem: BoxProblem):
        self.objective = problem.objective
        self.maximize = problem.sense is Sense.MAXIMIZE
        self.y_lo = np.array([b.lo for b in problem.y_bounds])
        self.y_hi = np.array([b.hi for b in problem.y_bounds])
        self.y_mid = 0.5 * (self.y_lo + self.y_hi)

    def best_y(self, x: np.ndarray) -> np.ndarray:
        coef = _y_coefficients(x, self.objective)
        signs = _sign_with_zero(coef)
        if not self.maximize:
            signs = -signs
        # Positive sign: push y_i up; negative: down; zero: midpoint.
        return np.where(signs > 0, self.y_hi, np.where(signs < 0, self.y_lo, self.y_mid))

    def values(self, x: np.ndarray) -> np.ndarray:
        """Optimal objective over the y box, for each row of x."""
        x = np.atleast_2d(x)
        coef = _y_coefficients(x, self.objective)
        y = self.best_y(x)
        return np.sum(coef * y, axis=-1)

    def loss(self, x: np.ndarray) -> np.ndarray:
        """Values oriented so that smaller is better."""
        v = self.values(x)
        return -v if self.maximize else v


def _check_well_posed(problem: BoxProblem) -> None:
    # All x_i can coincide exactly when the x intervals share a common point.
    highest_lo = max(b.lo for b in problem.x_bounds)
    lowest_hi = min(b.hi for b in problem.x_bounds)
    if highest_lo <= lowest_hi:
        raise IllPosedProblemError(
            "All x values can coincide inside the box, so sum((x_i - x_bar)^2) can reach zero.",
            problem.alpha)


def _start_points(x_lo: np.ndarray, x_hi: np.ndarray, opt: OptimizerConfig,
                  rng: np.random.Generator) -> np.ndarray:
    """Box vertices (all of them for small n, else a seeded sample) followed by interior points."""
    n = len(x_lo)
    if n <= MAX_EXHAUSTIVE_VERTICES:
        corners = np.array(list(itertools.product((0.0, 1.0), repeat=n)))
    else:
        corners = rng.integers(0, 2, size=(opt.multistart_count, n)).astype(float)
    interior = rng.uniform(size=(opt.multistart_count, n))
    unit = np.vstack([corners, interior])
    return x_lo + unit * (x_hi - x_lo)


def _line_minimize(evaluator: _BoxEvaluator, x: np.ndarray, i: int, lo: float, hi: float,
                   current: float, opt: OptimizerConfig) -> Tuple[float, float]:
    """
    Zooming scan of coordinate i over [lo, hi]: each pass evaluates one batch of evenly spaced
    points, then narrows to the two cells around the best one. Returns (t, loss) no worse than `current`.
    """
    t_best, f_best = float(x[i]), current
    trial = np.repeat(x[None, :], LINE_SCAN_POINTS, axis=0)
    a, b = lo, hi
    while True:
        grid = np.linspace(a, b, LINE_SCAN_POINTS)
        trial[:, i] = grid
        losses = evaluator.loss(trial)
        k = int(np.argmin(losses))
        if losses[k] < f_best:
            t_best, f_best = float(grid[k]), float(losses[k])
        if grid[1] - grid[0] <= opt.convergence_tol:
            return t_best, f_best
        a = grid[max(k - 1, 0)]
        b = grid[min(k + 1, LINE_SCAN_POINTS - 1)]


def _coordinate_search(evaluator: _BoxEvaluator, start: np.ndarray, x_lo: np.ndarray,
                       x_hi: np.ndarray, opt: OptimizerConfig) -> np.ndarray:
    """
    Projected coordinate descent: each sweep line-minimizes every free coordinate over its
    interval and keeps the move if it lowers the loss.
    """
    x = start.copy()
    current = float(evaluator.loss(x)[0])
    free = np.flatnonzero(x_hi > x_lo)
    for _ in range(opt.max_iterations):
        previous = current
        for i in free:
            t_best, f_best = _line_minimize(evaluator, x, i, x_lo[i], x_hi[i], current, opt)
            if f_best < current:
                x[i] = min(max(t_best, x_lo[i]), x_hi[i])
                current = f_best
        if previous - current <= opt.convergence_tol * (1.0 + abs(previous)):
            break
    return x


def _best_distinct_starts(starts: np.ndarray, losses: np.ndarray, count: int) -> List[np.ndarray]:
    """The `count` lowest-loss rows of `starts`, skipping exact duplicates; ties keep row order."""
    chosen: List[np.ndarray] = []
    for k in np.argsort(losses, kind='stable'):
        if any(np.array_equal(starts[k], row) for row in chosen):
            continue
        chosen.append(starts[k])
        if len(chosen) == count:
            break
    return chosen


def solve_box(problem: BoxProblem, opt: Optional[OptimizerConfig] = None) -> float:
    """
    Optimal b1 or b0 over the box. The y step is analytic (each y_i goes to the bound picked by
    the sign of its coefficient). The x step scores every start in one batch and runs the
    projected coordinate search from the best few distinct ones.
    """
    opt = opt or OptimizerConfig.from_config()
    _check_well_posed(problem)
    evaluator = _BoxEvaluator(problem)

    x_lo = np.array([b.lo for b in problem.x_bounds])
    x_hi = np.array([b.hi for b in problem.x_bounds])
    if np.all(x_lo == x_hi):
        return float(evaluator.values(x_lo)[0])

    rng = np.random.default_rng(opt.rng_seed)
    starts = _start_points(x_lo, x_hi, opt, rng)
    start_losses = evaluator.loss(starts)

    best_loss = float(np.min(start_losses))
    for start in _best_distinct_starts(starts, start_losses, REFINED_STARTS):
        x = _coordinate_search(evaluator, start, x_lo, x_hi, opt)
        best_loss = min(best_loss, float(evaluator.loss(x)[0]))
    return -best_loss if evaluator.maximize else best_loss
