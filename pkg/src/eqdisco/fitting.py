"""Deterministic nonlinear least squares for expression parameters.

Multi-start damped Gauss-Newton with central finite-difference Jacobians.
Restart 0 starts from the all-ones vector; later restarts draw seeded uniform
starts in [-10, 10]. A restart is poisoned (non-finite SSE) as soon as the
expression evaluates non-finite at any probed parameter vector.

``sse`` accumulates squared residuals sequentially over rows, so its value is
bit-identical to a plain row loop; the optimizer uses a vectorized loss
internally for step decisions and reports the sequential value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .errors import ArityError, SchemaError
from .expr import Expression, evaluate_batch
from .expr.evaluate import _eval_node


@dataclass(frozen=True)
class FitConfig:
    restarts: int = 4
    max_iters_per_restart: int = 100
    step_tolerance: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters_per_restart < 1:
            raise ValueError("restarts and max_iters_per_restart must be positive")
        if self.step_tolerance <= 0:
            raise ValueError("step_tolerance must be positive")


@dataclass
class FitResult:
    params: np.ndarray
    sse: float
    converged: bool
    evaluations: int

    def params_list(self) -> list[float]:
        return [float(p) for p in self.params]


def sse(expr: Expression, data: Dataset, params) -> float:
    """Sum of squared residuals, accumulated row by row with scalar evaluation.

    This is the reference value the discovery score consumes: a plain loop
    over rows, so an independent row-loop recomputation reproduces it
    bit-for-bit (the vectorized evaluator may differ by an ulp on
    transcendentals and is used only inside the optimizer's search).
    """
    params = tuple(params)
    if len(params) != expr.param_count:
        raise ArityError(
            f"got {len(params)} parameters, expression has {expr.param_count} slots"
        )
    root = expr.root
    y = data.y.tolist()
    rows = data.X.tolist()
    total = 0.0
    for row, target in zip(rows, y):
        r = _eval_node(root, row, params) - target
        total += r * r
    return total


class _Probe:
    """Residual evaluator that remembers whether any probe went non-finite."""

    def __init__(self, expr: Expression, X: np.ndarray, y: np.ndarray):
        self.expr = expr
        self.X = X
        self.y = y
        self.evaluations = 0
        self.poisoned = False

    def residuals(self, params: np.ndarray) -> np.ndarray | None:
        self.evaluations += 1
        if not np.all(np.isfinite(params)):
            self.poisoned = True
            return None
        r = evaluate_batch(self.expr, self.X, params) - self.y
        if not np.all(np.isfinite(r)):
            self.poisoned = True
            return None
        return r


def _jacobian(probe: _Probe, params: np.ndarray, r0_len: int) -> np.ndarray | None:
    # central differences, h scaled to parameter magnitude
    m = params.size
    J = np.empty((r0_len, m))
    for j in range(m):
        h = 1e-6 * max(1.0, abs(params[j]))
        up = params.copy()
        up[j] += h
        down = params.copy()
        down[j] -= h
        r_up = probe.residuals(up)
        r_down = probe.residuals(down)
        if r_up is None or r_down is None:
            return None
        J[:, j] = (r_up - r_down) / (2.0 * h)
    return J


def _gauss_newton(probe: _Probe, p0: np.ndarray, cfg: FitConfig) -> tuple[np.ndarray, bool]:
    """Damped Gauss-Newton descent from p0; returns (params, converged)."""
    p = p0.astype(np.float64).copy()
    r = probe.residuals(p)
    if r is None:
        return p, False
    loss = float(r @ r)
    lam = 1e-3
    for _ in range(cfg.max_iters_per_restart):
        J = _jacobian(probe, p, r.size)
        if J is None:
            return p, False
        g = J.T @ r
        H = J.T @ J
        try:
            step = np.linalg.solve(H + lam * np.eye(p.size), -g)
        except np.linalg.LinAlgError:
            lam *= 10.0
            if lam > 1e12:
                return p, False
            continue
        if not np.all(np.isfinite(step)):
            return p, False
        trial = p + step
        r_trial = probe.residuals(trial)
        if r_trial is None:
            return p, False
        trial_loss = float(r_trial @ r_trial)
        if trial_loss <= loss:
            p, r, loss = trial, r_trial, trial_loss
            lam = max(lam * 0.1, 1e-12)
            if float(np.linalg.norm(step)) < cfg.step_tolerance * (1.0 + float(np.linalg.norm(p))):
                return p, True
        else:
            lam *= 10.0
            if lam > 1e12:
                return p, True  # stuck in a flat basin; treat the incumbent as converged
    return p, False


def fit_params(expr: Expression, data: Dataset, cfg: FitConfig | None = None) -> FitResult:
    """Fit the expression's free parameters to the dataset by least squares."""
    cfg = cfg or FitConfig()
    if tuple(data.var_names) != tuple(expr.var_names):
        raise SchemaError(
            f"dataset variables {list(data.var_names)} do not match "
            f"expression variables {list(expr.var_names)}"
        )
    if len(data) == 0:
        raise SchemaError("cannot fit on an empty dataset")
    m = expr.param_count
    if m == 0:
        value = sse(expr, data, ())
        return FitResult(params=np.zeros(0), sse=value,
                         converged=bool(np.isfinite(value)), evaluations=1)

    rng = np.random.default_rng(np.random.SeedSequence([int(cfg.seed)]))
    starts = [np.ones(m)]
    for _ in range(cfg.restarts - 1):
        starts.append(rng.uniform(-10.0, 10.0, size=m))

    best_params: np.ndarray | None = None
    best_sse = np.inf
    best_converged = False
    evaluations = 0
    fallback = starts[0]
    for p0 in starts:
        probe = _Probe(expr, data.X, data.y)
        p, converged = _gauss_newton(probe, p0, cfg)
        evaluations += probe.evaluations
        if probe.poisoned:
            continue
        value = sse(expr, data, p)
        if np.isfinite(value) and value < best_sse:
            best_params, best_sse, best_converged = p, value, converged
    if best_params is None:
        return FitResult(params=fallback.copy(), sse=float("nan"),
                         converged=False, evaluations=evaluations)
    return FitResult(params=best_params, sse=best_sse,
                     converged=best_converged, evaluations=evaluations)
