"""Configuration settings and constants for the fuzzy regression tool."""

import os
import json
from dataclasses import dataclass

# The project root is the parent directory of the 'core' directory
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# --- User Settings Management ---
CONFIG_DIR = os.path.join(os.path.expanduser("~"), ".nufreg")
SETTINGS_FILE = os.path.join(CONFIG_DIR, "settings.json")

# Bumped on any incompatible change to the saved model layout.
MODEL_FORMAT_VERSION = "1.0"

def load_settings() -> dict:
    """Loads user settings from the config file."""
    if os.path.exists(SETTINGS_FILE):
        try:
            with open(SETTINGS_FILE, 'r', encoding='utf-8') as f:
                settings = json.load(f)
            if isinstance(settings, dict):
                return settings
        except (ValueError, IOError):
            # Covers JSONDecodeError and UnicodeDecodeError.
            pass
    return {}

_user_settings = load_settings()

@dataclass
class Config:
    """Application configuration settings."""

    PROJECT_ROOT: str = PROJECT_ROOT

    # Coefficient curves
    ALPHA_LEVELS: int = _user_settings.get("alpha_levels", 21)
    NESTING_WARN_TOL: float = _user_settings.get("nesting_warn_tol", 1e-6)

    # Box optimizer
    RNG_SEED: int = _user_settings.get("rng_seed", 0)
    MULTISTART_COUNT: int = _user_settings.get("multistart_count", 32)
    MAX_ITERATIONS: int = _user_settings.get("max_iterations", 500)
    CONVERGENCE_TOL: float = _user_settings.get("convergence_tol", 1e-9)

    # Spread search
    SEARCH_TOL: float = _user_settings.get("search_tol", 1e-8)
    COARSE_SCAN_POINTS: int = _user_settings.get("coarse_scan_points", 41)
    DENSE_SCAN_POINTS: int = _user_settings.get("dense_scan_points", 1000)

    # Forecasting
    FORECAST_GRID_POINTS: int = _user_settings.get("forecast_grid_points", 2001)

    # Reporting: printed reference values carry three decimals.
    DIVERGENCE_TOL: float = _user_settings.get("divergence_tol", 5e-4)

    def get_version(self) -> str:
        """Returns the tool version from version.txt, or 'unknown' if it can't be read."""
        try:
            with open(os.path.join(self.PROJECT_ROOT, 'version.txt'), 'r') as f:
                return f.read().strip()
        except IOError:
            return "unknown"

# Global config instance
config = Config()
