"""Generalization metrics and reporting curves.

WMAPE is sum|y - yhat| / sum|y| (scale-invariant percentage error). NMSE
normalizes by the centered target energy, so the mean predictor scores
exactly 1; an alternative sum(y^2) normalization exists in the literature,
this package deliberately uses the variance form. Rows with non-finite
predictions are never dropped: the metric goes non-finite and the offending
row count is reported alongside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import DegenerateTarget, LengthMismatch, UnknownVariable
from .expr import Expression, evaluate_batch


@dataclass
class MetricReport:
    wmape: float
    nmse: float
    mae: float
    n: int
    split: str = "train"
    nonfinite: int = 0
    per_point_abs_error: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "wmape": self.wmape,
            "nmse": self.nmse,
            "mae": self.mae,
            "n": self.n,
            "split": self.split,
            "nonfinite": self.nonfinite,
        }


def _paired(y, yhat) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    yhat = np.asarray(yhat, dtype=np.float64).reshape(-1)
    if y.shape != yhat.shape:
        raise LengthMismatch(f"y has {y.size} rows, yhat has {yhat.size}")
    if y.size == 0:
        raise LengthMismatch("metrics need at least one row")
    return y, yhat


def wmape(y, yhat) -> float:
    """sum|y - yhat| / sum|y|."""
    y, yhat = _paired(y, yhat)
    denom = float(np.sum(np.abs(y)))
    if denom == 0.0:
        raise DegenerateTarget("sum of |y| is zero; WMAPE undefined")
    return float(np.sum(np.abs(y - yhat))) / denom


def nmse(y, yhat) -> float:
    """sum (y - yhat)^2 / sum (y - mean(y))^2."""
    y, yhat = _paired(y, yhat)
    if y.size < 2:
        raise LengthMismatch("NMSE needs at least two rows")
    centered = y - np.mean(y)
    denom = float(np.sum(centered**2))
    if denom == 0.0:
        raise DegenerateTarget("target variance is zero; NMSE undefined")
    return float(np.sum((y - yhat) ** 2)) / denom


def mae(y, yhat) -> float:
    """(1/n) sum |y - yhat|."""
    y, yhat = _paired(y, yhat)
    return float(np.mean(np.abs(y - yhat)))


def metric_report(y, yhat, split: str = "train",
                  keep_curve: bool = False) -> MetricReport:
    """All three metrics for one split, tracking non-finite prediction rows."""
    y, yhat = _paired(y, yhat)
    bad = int(np.count_nonzero(~np.isfinite(yhat)))
    return MetricReport(
        wmape=wmape(y, yhat),
        nmse=nmse(y, yhat) if y.size >= 2 else float("nan"),
        mae=mae(y, yhat),
        n=int(y.size),
        split=split,
        nonfinite=bad,
        per_point_abs_error=np.abs(y - yhat) if keep_curve else None,
    )


def abs_error_curve(expr: Expression, params, data: Dataset, axis_var: str):
    """Per-row |y - yhat| sorted along one input variable.

    Returns a list of (x_value, abs_error, finite_flag) tuples; non-finite
    predictions are flagged rather than dropped.
    """
    if axis_var not in data.var_names:
        raise UnknownVariable(f"no input column named {axis_var!r}")
    x = data.column(axis_var)
    yhat = evaluate_batch(expr, data.X, params)
    err = np.abs(data.y - yhat)
    order = np.argsort(x, kind="stable")
    return [
        (float(x[i]), float(err[i]), bool(np.isfinite(yhat[i])))
        for i in order
    ]


def ood_trace(run_result, ood_dataset: Dataset) -> list[tuple[int, float]]:
    """Per-iteration WMAPE of the archive incumbent on the OOD split.

    Entries where the incumbent evaluates non-finite are reported as nan.
    """
    from .expr import parse
    from .problem import ProblemSpec

    spec = ProblemSpec(name="trace", var_names=ood_dataset.var_names,
                       output_name=ood_dataset.output_name)
    trace = []
    cache: dict[tuple[str, tuple], float] = {}
    for rec in run_result.per_iteration:
        key = (rec.archive_best_expr, tuple(rec.archive_best_params))
        if key not in cache:
            expr = parse(rec.archive_best_expr, spec)
            yhat = evaluate_batch(expr, ood_dataset.X, rec.archive_best_params)
            try:
                cache[key] = wmape(ood_dataset.y, yhat)
            except DegenerateTarget:
                cache[key] = float("nan")
        trace.append((rec.iteration, cache[key]))
    return trace
