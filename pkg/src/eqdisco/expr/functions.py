"""Closed table of built-in unary functions, with scalar and vectorized forms.

Domain violations never raise during evaluation; they surface as non-finite
values so a bad candidate scores badly instead of crashing a run.
"""

from __future__ import annotations

import math

import numpy as np

# Lanczos approximation, g=7, 9 coefficients. Accurate to ~1e-13 relative on
# the real line away from the poles; reflection handles z < 0.5.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(z: float) -> float:
    """Real gamma function via Lanczos; non-finite at the poles (z = 0, -1, -2, ...)."""
    if not math.isfinite(z):
        return math.nan
    if z <= 0.0 and z == math.floor(z):
        return math.nan
    if z < 0.5:
        try:
            return math.pi / (math.sin(math.pi * z) * gamma(1.0 - z))
        except (OverflowError, ZeroDivisionError):
            return math.nan
    zz = z - 1.0
    x = _LANCZOS_COEF[0]
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        x += c / (zz + i)
    t = zz + _LANCZOS_G + 0.5
    try:
        return math.sqrt(2.0 * math.pi) * t ** (zz + 0.5) * math.exp(-t) * x
    except OverflowError:
        return math.inf


def gamma_vec(z: np.ndarray) -> np.ndarray:
    """Vectorized gamma matching the scalar implementation."""
    z = np.asarray(z, dtype=np.float64)
    with np.errstate(all="ignore"):
        refl = z < 0.5
        zz = np.where(refl, 1.0 - z, z) - 1.0
        x = np.full_like(zz, _LANCZOS_COEF[0])
        for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
            x += c / (zz + i)
        t = zz + _LANCZOS_G + 0.5
        main = np.sqrt(2.0 * np.pi) * t ** (zz + 0.5) * np.exp(-t) * x
        out = np.where(refl, np.pi / (np.sin(np.pi * z) * main), main)
        pole = (z <= 0.0) & (z == np.floor(z))
        out = np.where(pole | ~np.isfinite(z), np.nan, out)
    return out


def _sigmoid(z: float) -> float:
    try:
        return 1.0 / (1.0 + math.exp(-z))
    except OverflowError:
        return 0.0 if z < 0 else 1.0


def _sigmoid_vec(z: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def _log(x: float) -> float:
    if x > 0.0:
        return math.log(x)
    return -math.inf if x == 0.0 else math.nan


def _sqrt(x: float) -> float:
    return math.sqrt(x) if x >= 0.0 else math.nan


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _clip01(x: float) -> float:
    return min(max(x, 0.0), 1.0)


def _clip01_vec(x: np.ndarray) -> np.ndarray:
    return np.clip(x, 0.0, 1.0)


# name -> (scalar impl, vectorized impl); all built-ins take one argument.
FUNCTIONS = {
    "sin": (math.sin, np.sin),
    "cos": (math.cos, np.cos),
    "tan": (math.tan, np.tan),
    "tanh": (math.tanh, np.tanh),
    "exp": (_exp, np.exp),
    "log": (_log, np.log),
    "sqrt": (_sqrt, np.sqrt),
    "abs": (abs, np.abs),
    "gamma": (gamma, gamma_vec),
    "sigmoid": (_sigmoid, _sigmoid_vec),
    "clip01": (_clip01, _clip01_vec),
}

FUNCTION_NAMES = tuple(sorted(FUNCTIONS))
