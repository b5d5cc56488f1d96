"""One-dimensional minimization helpers for the error-term searches."""

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass
class LineSearchResult:
    """Best point found on a segment and whether the scan fallback produced it."""
    x: float
    value: float
    used_fallback: bool = False


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float = 1e-8) -> Tuple[float, float]:
    """
    Golden-section search for a minimum of `f` on [a, b].

    Shrinks the bracket until it is narrower than `tol` and returns the best point seen
    (the two interior points and both ends of the final bracket) with its value.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc < yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    candidates = [(yc, c), (yd, d), (f(a), a), (f(b), b)]
    best_value, best_x = min(candidates, key=lambda item: item[0])
    return best_x, best_value


def scan(f: Callable[[float], float], a: float, b: float, points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluates `f` on `points` evenly spaced values over [a, b]."""
    xs = np.linspace(a, b, max(points, 2))
    values = np.array([f(float(x)) for x in xs])
    return xs, values


def guarded_minimize(f: Callable[[float], float], a: float, b: float, tol: float,
                     coarse_points: int = 41, dense_points: int = 1000) -> LineSearchResult:
    """
    Golden-section search guarded against non-unimodal objectives.

    A coarse scan checks the golden-section answer; if the scan finds a lower value, a dense scan
    locates the best cell and golden-section refines inside it.
    """
    if b - a <= tol:
        x = 0.5 * (a + b)
        return LineSearchResult(x, f(x))

    x_best, f_best = golden_section(f, a, b, tol)

    xs, values = scan(f, a, b, coarse_points)
    k = int(np.argmin(values))
    if values[k] >= f_best - 1e-12 * (1.0 + abs(f_best)):
        return LineSearchResult(x_best, f_best)
    candidates = [(float(values[k]), float(xs[k]))]

    xs, values = scan(f, a, b, dense_points)
    k = int(np.argmin(values))
    candidates.append((float(values[k]), float(xs[k])))
    lo = float(xs[max(k - 1, 0)])
    hi = float(xs[min(k + 1, len(xs) - 1)])
    x_ref, f_ref = golden_section(f, lo, hi, tol)
    candidates.append((f_ref, x_ref))

    # min() keeps the first of equal values, so ties resolve deterministically.
    value, x = min(candidates, key=lambda item: item[0])
    return LineSearchResult(x, value, used_fallback=True)
