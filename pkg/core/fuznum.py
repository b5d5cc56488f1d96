"""Trapezoidal fuzzy numbers: alpha-cuts, membership, arithmetic, COA and the discrepancy metric."""

import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np
from scipy.integrate import trapezoid

from .utils import FuzzyRegressionError


class DomainError(FuzzyRegressionError):
    """Raised for arguments outside an operation's domain (bad alpha, unordered trapezoid)."""
    pass


class DegenerateMembershipError(FuzzyRegressionError):
    """Raised when a membership function has zero area and no centroid exists."""
    pass


@dataclass(frozen=True)
class Interval:
    """A closed crisp interval [lo, hi]."""
    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise DomainError("Interval bounds must be numbers, got NaN.")
        if self.lo > self.hi:
            raise DomainError(f"Interval lower bound {self.lo!r} exceeds upper bound {self.hi!r}.")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, value: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= value <= self.hi + tol

    def contains_interval(self, other: 'Interval', tol: float = 0.0) -> bool:
        return self.lo - tol <= other.lo and other.hi <= self.hi + tol


@dataclass(frozen=True)
class TrapezoidalFuzzyNumber:
    """
    The trapezoid (l, m1, m2, r): membership rises on [l, m1], is 1 on the core [m1, m2]
    and falls on [m2, r]. A crisp value v is the degenerate trapezoid (v, v, v, v).
    """
    l: float
    m1: float
    m2: float
    r: float

    def __post_init__(self):
        values = (self.l, self.m1, self.m2, self.r)
        if not all(math.isfinite(v) for v in values):
            raise DomainError(f"Trapezoid components must be finite, got {values}.")
        if not (self.l <= self.m1 <= self.m2 <= self.r):
            raise DomainError(f"Trapezoid components must satisfy l <= m1 <= m2 <= r, got {values}.")

    @classmethod
    def crisp(cls, value: float) -> 'TrapezoidalFuzzyNumber':
        return cls(value, value, value, value)

    def as_tuple(self) -> Tuple[float, float, float, float]:
        return (self.l, self.m1, self.m2, self.r)

    @property
    def is_crisp(self) -> bool:
        return self.l == self.r

    @property
    def left_spread(self) -> float:
        return self.m1 - self.l

    @property
    def right_spread(self) -> float:
        return self.r - self.m2

    @property
    def total_spread(self) -> float:
        return self.r - self.l

    @property
    def core_midpoint(self) -> float:
        return 0.5 * (self.m1 + self.m2)

    @property
    def support(self) -> Interval:
        return Interval(self.l, self.r)

    @property
    def core(self) -> Interval:
        return Interval(self.m1, self.m2)


def alpha_cut(f: TrapezoidalFuzzyNumber, alpha: float) -> Interval:
    """Returns the closed alpha-cut of `f`; alpha=0 gives the support, alpha=1 the core."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}.")
    if alpha == 0.0:
        return Interval(f.l, f.r)
    if alpha == 1.0:
        return Interval(f.m1, f.m2)
    # Clamp against rounding so the cut stays inside [l, m1] x [m2, r].
    lo = min(max(f.l + alpha * (f.m1 - f.l), f.l), f.m1)
    hi = max(min(f.r - alpha * (f.r - f.m2), f.r), f.m2)
    return Interval(lo, hi)


def membership(f: TrapezoidalFuzzyNumber, y: float) -> float:
    """Piecewise-linear membership of `y` in `f`. A degenerate leg takes value 1 at its point."""
    if y < f.l or y > f.r:
        return 0.0
    if f.m1 <= y <= f.m2:
        return 1.0
    if y < f.m1:
        return (y - f.l) / (f.m1 - f.l)
    return (f.r - y) / (f.r - f.m2)


def membership_array(f: TrapezoidalFuzzyNumber, y: np.ndarray) -> np.ndarray:
    """Vectorized `membership` over an array of points."""
    y = np.asarray(y, dtype=float)
    mu = np.zeros_like(y)
    if f.m1 > f.l:
        left = (y >= f.l) & (y < f.m1)
        mu[left] = (y[left] - f.l) / (f.m1 - f.l)
    mu[(y >= f.m1) & (y <= f.m2)] = 1.0
    if f.r > f.m2:
        right = (y > f.m2) & (y <= f.r)
        mu[right] = (f.r - y[right]) / (f.r - f.m2)
    return mu


def affine_image(f: TrapezoidalFuzzyNumber, a: float, b: float) -> TrapezoidalFuzzyNumber:
    """Returns a*f + b; a negative scale reverses the endpoints."""
    if a >= 0:
        return TrapezoidalFuzzyNumber(a * f.l + b, a * f.m1 + b, a * f.m2 + b, a * f.r + b)
    return TrapezoidalFuzzyNumber(a * f.r + b, a * f.m2 + b, a * f.m1 + b, a * f.l + b)


def add(f: TrapezoidalFuzzyNumber, g: TrapezoidalFuzzyNumber) -> TrapezoidalFuzzyNumber:
    """Fuzzy addition of two trapezoids (alpha-cut interval addition)."""
    return TrapezoidalFuzzyNumber(f.l + g.l, f.m1 + g.m1, f.m2 + g.m2, f.r + g.r)


def _slice_centroid(alphas: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> float:
    """
    Centroid of the region under the piecewise-linear membership whose alpha-cuts are [lo, hi].
    Between sampled levels the boundaries are linear in alpha, so both integrals are exact.
    """
    h = np.diff(alphas)
    width = hi - lo
    area = float(np.sum(h * (width[:-1] + width[1:]) / 2.0))
    if area <= 0.0:
        raise DegenerateMembershipError("Membership function has zero area; the center of area is undefined.")
    hi_sq = hi[:-1] ** 2 + hi[:-1] * hi[1:] + hi[1:] ** 2
    lo_sq = lo[:-1] ** 2 + lo[:-1] * lo[1:] + lo[1:] ** 2
    moment = float(np.sum(h * (hi_sq - lo_sq) / 6.0))
    return moment / area


def coa_defuzzify(shape: Union[TrapezoidalFuzzyNumber, 'MembershipCurve']) -> float:
    """
    Center-of-area defuzzification of a trapezoid or a sampled membership curve.
    Curves are reconstructed as the piecewise-linear interpolant of their cut endpoints.
    """
    if isinstance(shape, TrapezoidalFuzzyNumber):
        alphas = np.array([0.0, 1.0])
        lo = np.array([shape.l, shape.m1])
        hi = np.array([shape.r, shape.m2])
    else:
        alphas, lo, hi = shape.boundary_arrays()
    return _slice_centroid(alphas, lo, hi)


def coa_from_samples(z: np.ndarray, mu: np.ndarray) -> float:
    """Center of area of a membership function sampled on the grid `z` (trapezoid rule)."""
    z = np.asarray(z, dtype=float)
    mu = np.asarray(mu, dtype=float)
    area = trapezoid(mu, z)
    if area <= 0.0:
        raise DegenerateMembershipError("Sampled membership has zero area; the center of area is undefined.")
    return float(trapezoid(z * mu, z) / area)


def discrepancy(observed: TrapezoidalFuzzyNumber, estimated: TrapezoidalFuzzyNumber) -> float:
    """
    Integral of |mu_observed - mu_estimated| over the union of both supports, computed exactly.
    Both memberships are linear between consecutive knots; where their difference changes sign
    the crossing point splits the segment into two triangles.
    """
    knots = sorted(set(observed.as_tuple() + estimated.as_tuple()))
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        width = b - a
        # Sample strictly inside the segment and extrapolate to its ends, so a vertical
        # leg sitting on a knot never leaks its point value into the neighbouring segment.
        q1 = membership(observed, a + 0.25 * width) - membership(estimated, a + 0.25 * width)
        q3 = membership(observed, a + 0.75 * width) - membership(estimated, a + 0.75 * width)
        d0 = 1.5 * q1 - 0.5 * q3
        d1 = 1.5 * q3 - 0.5 * q1
        if d0 * d1 >= 0.0:
            total += width * (abs(d0) + abs(d1)) / 2.0
        else:
            crossing = a + width * abs(d0) / (abs(d0) + abs(d1))
            total += (crossing - a) * abs(d0) / 2.0 + (b - crossing) * abs(d1) / 2.0
    return total


def quadrature_discrepancy(observed: TrapezoidalFuzzyNumber, estimated: TrapezoidalFuzzyNumber,
                           step: float = 1e-5) -> float:
    """Brute-force trapezoid-rule estimate of `discrepancy`, used as a cross-check."""
    lo = min(observed.l, estimated.l)
    hi = max(observed.r, estimated.r)
    if hi <= lo:
        return 0.0
    count = int(math.ceil((hi - lo) / step)) + 1
    z = np.linspace(lo, hi, count)
    diff = np.abs(membership_array(observed, z) - membership_array(estimated, z))
    return float(trapezoid(diff, z))
