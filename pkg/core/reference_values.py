"""
The published worked example: its data and the numbers printed alongside it.
The printed numbers are kept for side-by-side reporting only; nothing is fitted to them.
"""

from typing import List, Sequence

from .coeffs import FuzzyObservation
from .fuznum import TrapezoidalFuzzyNumber

# (x, (y_l, y_m1, y_m2, y_r)) with crisp x
WORKED_EXAMPLE_ROWS = [
    (1.0, (2.0, 2.5, 2.5, 3.0)),
    (2.0, (5.0, 5.5, 5.5, 6.0)),
    (3.0, (6.0, 6.5, 6.5, 7.0)),
    (4.0, (9.0, 9.5, 9.5, 10.0)),
    (5.0, (9.0, 11.5, 11.5, 14.0)),
]

# Printed regression model 0.6 + 2.4x
PRINTED_B0 = 0.6
PRINTED_B1 = 2.4

# Printed membership functions of the coefficients: (support lo, peak, support hi)
PRINTED_B0_CURVE = (-1.4, 0.7, 2.8)
PRINTED_B1_CURVE = (1.6, 2.4, 3.2)

# Printed error terms as (left, right) spreads
PRINTED_NON_UNIFORM_TERMS = [(0.6, 0.6)] * 5
PRINTED_TWO_STAGE_TERM = (1.2, 0.796)

# Printed estimation errors per observation and their totals
PRINTED_TWO_STAGE_ERRORS = [0.456, 1.093, 0.789, 0.557, 1.586]
PRINTED_TWO_STAGE_TOTAL = 4.480
PRINTED_NON_UNIFORM_ERRORS = [0.356, 0.836, 0.836, 0.356, 0.000]
PRINTED_NON_UNIFORM_TOTAL = 2.384


def worked_example_observations() -> List[FuzzyObservation]:
    """The worked example as fuzzy observations."""
    return [FuzzyObservation(TrapezoidalFuzzyNumber.crisp(x), TrapezoidalFuzzyNumber(*y))
            for x, y in WORKED_EXAMPLE_ROWS]


def matches_worked_example(data: Sequence[FuzzyObservation]) -> bool:
    """True when `data` is exactly the worked example."""
    return list(data) == worked_example_observations()
