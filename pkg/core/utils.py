"""
Core utility functions shared across the application's backend logic.
"""

from typing import List, Optional, Sequence

from thefuzz import fuzz


class FuzzyRegressionError(Exception):
    """Base class for every error raised by the regression pipeline."""
    pass


def format_number(value: float, width: int = 0, decimals: int = 3) -> str:
    """Formats a float for the summary tables, right-aligned to `width`."""
    text = f"{value:.{decimals}f}"
    # Avoid printing '-0.000'
    if text.lstrip('-').strip('0.') == '' and text.startswith('-'):
        text = text[1:]
    return text.rjust(width)


def format_trapezoid(values: Sequence[float], decimals: int = 3) -> str:
    """Formats four trapezoid components as '(a, b, c, d)'."""
    return "(" + ", ".join(format_number(v, decimals=decimals) for v in values) + ")"


def closest_match(name: str, choices: List[str], threshold: int = 60) -> Optional[str]:
    """
    Returns the choice most similar to `name`, or None if nothing scores at least `threshold`.
    Used for 'did you mean' hints on misspelled column and coefficient names.
    """
    best_choice, best_score = None, -1
    for choice in choices:
        score = fuzz.ratio(name.strip().lower(), choice.lower())
        if score > best_score:
            best_choice, best_score = choice, score
    return best_choice if best_score >= threshold else None
