import math

import numpy as np
import pytest

from eqdisco.data import Dataset
from eqdisco.errors import DegenerateTarget, LengthMismatch, UnknownVariable
from eqdisco.expr import parse
from eqdisco.metrics import abs_error_curve, mae, metric_report, nmse, wmape


def test_wmape_fixtures():
    assert wmape([1, 2], [1, 2]) == 0.0
    assert wmape([2, 2], [1, 3]) == 0.5
    assert wmape([10], [9]) == pytest.approx(0.1, rel=1e-12)


def test_wmape_degenerate_and_mismatch():
    with pytest.raises(DegenerateTarget):
        wmape([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(LengthMismatch):
        wmape([1.0], [1.0, 2.0])


def test_wmape_scale_invariance():
    rng = np.random.default_rng(2)
    for _ in range(100):
        y = rng.normal(0, 3, 20)
        yhat = y + rng.normal(0, 1, 20)
        if np.sum(np.abs(y)) == 0:
            continue
        c = rng.uniform(-10, 10)
        if c == 0:
            continue
        base = wmape(y, yhat)
        scaled = wmape(c * y, c * yhat)
        assert abs(base - scaled) <= 1e-12 * max(1.0, abs(base))


def test_nmse_fixtures():
    y = np.array([1.0, 2.0, 3.0, 4.0])
    assert nmse(y, y) == 0.0
    assert nmse(y, np.full(4, y.mean())) == 1.0
    with pytest.raises(DegenerateTarget):
        nmse(np.ones(3), np.zeros(3))


def test_nmse_matches_two_pass_recomputation():
    rng = np.random.default_rng(4)
    for _ in range(20):
        y = rng.normal(0, 2, 30)
        yhat = rng.normal(0, 2, 30)
        mean = sum(y) / len(y)
        num = sum((a - b) ** 2 for a, b in zip(y, yhat))
        den = sum((a - mean) ** 2 for a in y)
        assert abs(nmse(y, yhat) - num / den) < 1e-12 * max(1.0, num / den)


def test_mae_fixtures():
    assert mae([1, 3], [2, 2]) == 1.0
    assert mae([5, 5], [5, 5]) == 0.0
    y = np.array([1.0, -2.0, 3.0])
    yhat = np.array([0.5, -1.0, 2.0])
    assert mae(3 * y, 3 * yhat) == pytest.approx(3 * mae(y, yhat), rel=1e-12)


def test_permutation_invariance():
    rng = np.random.default_rng(6)
    y = rng.normal(0, 1, 25)
    yhat = rng.normal(0, 1, 25)
    perm = rng.permutation(25)
    for fn in (wmape, nmse, mae):
        assert fn(y, yhat) == pytest.approx(fn(y[perm], yhat[perm]), rel=1e-12)


def test_nonfinite_predictions_never_look_good():
    y = np.array([1.0, 2.0, 3.0])
    yhat = np.array([1.0, np.nan, 3.0])
    assert math.isnan(wmape(y, yhat))
    assert math.isnan(mae(y, yhat))
    report = metric_report(y, yhat)
    assert report.nonfinite == 1


def test_abs_error_curve(spec_x):
    x = np.array([3.0, 1.0, 2.0])
    data = Dataset(("x",), x.reshape(-1, 1), 2 * x)
    e = parse("2.0 * x", spec_x)
    curve = abs_error_curve(e, (), data, "x")
    assert len(curve) == 3
    assert [pt[0] for pt in curve] == [1.0, 2.0, 3.0]  # sorted by axis value
    assert all(pt[1] == 0.0 for pt in curve)
    assert all(pt[2] for pt in curve)
    with pytest.raises(UnknownVariable):
        abs_error_curve(e, (), data, "z")


def test_abs_error_curve_manual_fixture(spec_x):
    x = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    y = np.array([0.0, 1.5, 3.5, 6.5, 9.0])
    data = Dataset(("x",), x.reshape(-1, 1), y)
    e = parse("2.0 * x", spec_x)
    curve = abs_error_curve(e, (), data, "x")
    manual = [abs(yv - 2 * xv) for xv, yv in zip(x, y)]
    assert [pt[1] for pt in curve] == manual


def test_abs_error_curve_flags_nonfinite(spec_x):
    data = Dataset(("x",), np.array([[-1.0], [1.0]]), np.array([0.0, 0.0]))
    e = parse("log(x)", spec_x)
    curve = abs_error_curve(e, (), data, "x")
    assert len(curve) == 2
    assert curve[0][2] is False  # x=-1 row flagged, not dropped
    assert curve[1][2] is True
