"""Dataset CSV ingestion and saved-model (JSON) persistence."""

import csv
import json
import os
from typing import Any, Dict, List, Optional, Tuple

from packaging.version import InvalidVersion, Version

from .boxopt import OptimizerConfig
from .coeffs import FuzzyObservation, MembershipCurve
from .config import MODEL_FORMAT_VERSION, config
from .fuznum import DomainError, TrapezoidalFuzzyNumber
from .spreads import ErrorTerm, FittedModel, SpreadConfig, UniformBaseline
from .utils import FuzzyRegressionError, closest_match

DATASET_COLUMNS = ["x_l", "x_m1", "x_m2", "x_r", "y_l", "y_m1", "y_m2", "y_r"]
MODEL_FORMAT_NAME = "nufreg-model"


class DatasetParseError(FuzzyRegressionError):
    """The dataset file is not an 8-column numeric CSV."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column '{column}'")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
        self.row = row
        self.column = column


class DatasetValidationError(FuzzyRegressionError):
    """The dataset parses but violates trapezoid ordering or is too small."""

    def __init__(self, message: str, row: Optional[int] = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class ModelFileError(FuzzyRegressionError):
    """The model file is corrupt or written by an incompatible format version."""
    pass


def _check_header(header: List[str]) -> None:
    names = [h.strip().lower() for h in header]
    if names == DATASET_COLUMNS:
        return
    if len(names) != len(DATASET_COLUMNS):
        raise DatasetParseError(
            f"expected {len(DATASET_COLUMNS)} columns ({', '.join(DATASET_COLUMNS)}), found {len(names)}.", row=0)
    for expected, found in zip(DATASET_COLUMNS, names):
        if expected != found:
            hint = closest_match(found, DATASET_COLUMNS)
            suggestion = f" Did you mean '{hint}'?" if hint else ""
            raise DatasetParseError(f"unexpected header name, expected '{expected}'.{suggestion}",
                                    row=0, column=found)


def load_dataset(path: str, verbose: bool = False) -> List[FuzzyObservation]:
    """
    Reads a dataset CSV with the header x_l,x_m1,x_m2,x_r,y_l,y_m1,y_m2,y_r.
    Rows are numbered from 1 after the header; blank lines are skipped.
    """
    try:
        with open(path, 'r', encoding='utf-8', newline='') as f:
            rows = [row for row in csv.reader(f) if any(cell.strip() for cell in row)]
    except UnicodeDecodeError as e:
        raise DatasetParseError(f"file is not valid UTF-8 text ({e.reason} at byte {e.start}).")
    if not rows:
        raise DatasetParseError("file is empty; expected a header row.", row=0)
    _check_header(rows[0])

    data: List[FuzzyObservation] = []
    for row_num, row in enumerate(rows[1:], 1):
        if len(row) != len(DATASET_COLUMNS):
            raise DatasetParseError(f"expected {len(DATASET_COLUMNS)} values, found {len(row)}.", row=row_num)
        values = []
        for column, cell in zip(DATASET_COLUMNS, row):
            try:
                values.append(float(cell))
            except ValueError:
                raise DatasetParseError(f"'{cell.strip()}' is not a number.", row=row_num, column=column)
        try:
            data.append(FuzzyObservation(TrapezoidalFuzzyNumber(*values[:4]), TrapezoidalFuzzyNumber(*values[4:])))
        except DomainError as e:
            raise DatasetValidationError(str(e), row=row_num) from e

    if len(data) < 2:
        raise DatasetValidationError(f"at least 2 observations are required, found {len(data)}.")
    if verbose:
        print(f"INFO: Loaded {len(data)} observations from '{path}'.")
    return data


def _model_to_dict(model: FittedModel, baseline: Optional[UniformBaseline]) -> Dict[str, Any]:
    def curve_rows(curve: MembershipCurve) -> List[List[float]]:
        return [[level.alpha, level.cut.lo, level.cut.hi] for level in curve.levels]

    return {
        "format": MODEL_FORMAT_NAME,
        "format_version": MODEL_FORMAT_VERSION,
        "config": {
            "alpha_levels": model.alpha_levels,
            "optimizer": {
                "multistart_count": model.optimizer.multistart_count,
                "max_iterations": model.optimizer.max_iterations,
                "convergence_tol": model.optimizer.convergence_tol,
                "rng_seed": model.optimizer.rng_seed,
            },
            "spreads": {
                "l_min": model.spreads.l_min,
                "r_min": model.spreads.r_min,
                "search_tol": model.spreads.search_tol,
                "coarse_points": model.spreads.coarse_points,
                "dense_points": model.spreads.dense_points,
            },
        },
        "coefficients": {"b0": model.b0_c, "b1": model.b1_c},
        "curves": {"b0": curve_rows(model.b0_curve), "b1": curve_rows(model.b1_curve)},
        "observations": [{"x": list(obs.x.as_tuple()), "y": list(obs.y.as_tuple())} for obs in model.observations],
        "error_terms": [[term.left, term.right] for term in model.error_terms],
        "discrepancies": list(model.per_obs_discrepancy),
        "total_discrepancy": model.total_discrepancy,
        "baseline": None if baseline is None else {
            "error_term": [baseline.error_term.left, baseline.error_term.right],
            "discrepancies": list(baseline.per_obs),
            "total": baseline.total,
        },
    }


def dumps_model(model: FittedModel, baseline: Optional[UniformBaseline] = None) -> str:
    """
    Serializes a model to JSON text. Floats use Python's shortest round-trip repr (at most 17
    significant digits) and keys keep a fixed order, so equal models give identical bytes.
    """
    return json.dumps(_model_to_dict(model, baseline), indent=2) + "\n"


def save_model(path: str, model: FittedModel, baseline: Optional[UniformBaseline] = None,
               verbose: bool = False) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dumps_model(model, baseline))
    if verbose:
        print(f"INFO: Model saved to '{path}'.")


def _check_version(found: Any) -> None:
    try:
        found_version = Version(str(found))
    except InvalidVersion:
        raise ModelFileError(f"Model file has an invalid format version '{found}'.")
    if found_version.major != Version(MODEL_FORMAT_VERSION).major:
        raise ModelFileError(
            f"Model file format {found_version} is not supported (this tool reads {MODEL_FORMAT_VERSION}).")


def loads_model(text: str) -> Tuple[FittedModel, Optional[UniformBaseline]]:
    """Parses JSON text written by `dumps_model`."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelFileError(f"Model file is not valid JSON: {e}")
    if not isinstance(raw, dict) or raw.get("format") != MODEL_FORMAT_NAME:
        raise ModelFileError("File is not a saved regression model.")
    _check_version(raw.get("format_version"))

    try:
        cfg = raw["config"]
        observations = [FuzzyObservation(TrapezoidalFuzzyNumber(*o["x"]), TrapezoidalFuzzyNumber(*o["y"]))
                        for o in raw["observations"]]
        curves = {}
        for name in ("b0", "b1"):
            rows = raw["curves"][name]
            curves[name] = MembershipCurve.from_bounds([r[0] for r in rows], [r[1] for r in rows],
                                                       [r[2] for r in rows])
        model = FittedModel(
            b0_c=float(raw["coefficients"]["b0"]),
            b1_c=float(raw["coefficients"]["b1"]),
            b0_curve=curves["b0"],
            b1_curve=curves["b1"],
            error_terms=[ErrorTerm(float(l), float(r)) for l, r in raw["error_terms"]],
            per_obs_discrepancy=[float(d) for d in raw["discrepancies"]],
            total_discrepancy=float(raw["total_discrepancy"]),
            observations=observations,
            alpha_levels=int(cfg["alpha_levels"]),
            optimizer=OptimizerConfig(**cfg["optimizer"]),
            spreads=SpreadConfig(**cfg["spreads"]),
        )
        baseline = None
        if raw.get("baseline") is not None:
            b = raw["baseline"]
            baseline = UniformBaseline(ErrorTerm(*(float(v) for v in b["error_term"])),
                                       [float(d) for d in b["discrepancies"]], float(b["total"]))
    except (KeyError, TypeError, ValueError, IndexError, FuzzyRegressionError) as e:
        raise ModelFileError(f"Model file is corrupt: {e}")
    return model, baseline


def load_model(path: str, verbose: bool = False) -> Tuple[FittedModel, Optional[UniformBaseline]]:
    """Loads a saved model; missing files raise OSError, damaged ones ModelFileError."""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except UnicodeDecodeError as e:
        raise ModelFileError(f"Model file is not valid UTF-8 text ({e.reason} at byte {e.start}).")
    model, baseline = loads_model(text)
    if verbose:
        print(f"INFO: Loaded model with {len(model.observations)} observations from '{path}' "
              f"(tool {config.get_version()}).")
    return model, baseline
