"""Generators for the six analytically specified benchmark problems.

Each generator samples inputs uniformly inside its range spec, computes the
target from the governing equation, and returns per-split datasets whose
provenance records the seed, the ranges, any drawn constants, and the ground
truth written in the expression grammar. The target formulas are written with
the same operation grouping as the recorded ground-truth text, so evaluating
that text reproduces the stored targets to the last bit (modulo the gamma
routine, shared with the expression evaluator).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import Dataset, DatasetSplits, Provenance
from ..errors import RangeError
from ..expr.functions import gamma_vec
from .ranges import RangeSpec, VarRange, sample_plan, split_id_ood

_PI = float(np.pi)


def _make_splits(spec: RangeSpec, seed: int, formula, output_name: str,
                 extra: dict | None = None) -> DatasetSplits:
    plans = split_id_ood(spec, seed)
    var_names = spec.var_names()
    out = {}
    for plan in plans:
        if plan is None:
            continue
        X = sample_plan(plan)
        y = formula(*(X[:, i] for i in range(X.shape[1])))
        if not np.all(np.isfinite(y)):
            raise RangeError(
                f"governing equation produced non-finite targets in split {plan.split}"
            )
        prov = Provenance(kind="synthetic", seed=int(seed), ranges=spec.to_dict(),
                          extra=extra)
        out[plan.split] = Dataset(var_names, X, y, output_name=output_name,
                                  split=plan.split, provenance=prov)
    return DatasetSplits(train=out["train"], test_id=out.get("test_id"),
                         test_ood=out.get("test_ood"))


# --- chi-squared probability density ---

CHI2PDF_GROUND_TRUTH = "x^(k/2.0 - 1.0) * exp(-x/2.0) / (2.0^(k/2.0) * gamma(k/2.0))"


def _chi2_ranges(n_train: int, n_test: int) -> RangeSpec:
    return RangeSpec(
        variables=(("x", VarRange(1e-3, 10.0)), ("k", VarRange(1, 10, integer=True))),
        n_train=n_train, n_test_id=n_test,
    )


def gen_chi2pdf(n_train: int = 1000, n_test: int = 200, seed: int = 0,
                ranges: RangeSpec | None = None) -> DatasetSplits:
    """Probability density of the chi-squared distribution over (x, k)."""
    spec = ranges or _chi2_ranges(n_train, n_test)
    for name, vr in spec.variables:
        if name == "x" and vr.low <= 0:
            raise RangeError("chi2pdf needs x > 0")
        if name == "k" and (vr.low < 1 or not vr.integer):
            raise RangeError("chi2pdf needs integer k >= 1")

    def formula(x, k):
        return x ** (k / 2.0 - 1.0) * np.exp(-x / 2.0) / (2.0 ** (k / 2.0) * gamma_vec(k / 2.0))

    return _make_splits(spec, seed, formula, "p",
                        extra={"ground_truth": CHI2PDF_GROUND_TRUTH})


# --- nonlinear damped oscillator ---

NDO_GROUND_TRUTH = "0.3*sin(t) - 0.5*v^3.0 - x*v - 5.0*x*exp(0.5*x)"


def _ndo_ranges(n: int) -> RangeSpec:
    return RangeSpec(
        variables=(("t", VarRange(0.0, 10.0)), ("x", VarRange(-2.0, 2.0)),
                   ("v", VarRange(-2.0, 2.0))),
        n_train=n, n_test_id=n,
    )


def gen_ndo(n: int = 10000, seed: int = 0, ranges: RangeSpec | None = None) -> DatasetSplits:
    """Acceleration of a nonlinear damped, driven oscillator over (t, x, v)."""
    spec = ranges or _ndo_ranges(n)

    def formula(t, x, v):
        return 0.3 * np.sin(t) - 0.5 * v ** 3.0 - x * v - 5.0 * x * np.exp(0.5 * x)

    return _make_splits(spec, seed, formula, "a", extra={"ground_truth": NDO_GROUND_TRUTH})


# --- two-hidden-unit sigmoid network ---

def _nnn_ranges(n_train: int, n_test: int) -> RangeSpec:
    return RangeSpec(
        variables=(("x1", VarRange(-3.0, 3.0)), ("x2", VarRange(-3.0, 3.0))),
        n_train=n_train, n_test_id=n_test,
    )


def nnn_ground_truth(w: np.ndarray) -> str:
    w11, w12, b1, w21, w22, b2, v1, v2, c = (repr(float(x)) for x in w)
    return (f"{v1}*sigmoid({w11}*x1 + {w12}*x2 + {b1}) + "
            f"{v2}*sigmoid({w21}*x1 + {w22}*x2 + {b2}) + {c}")


def gen_nnn(n_train: int = 10000, n_test: int = 2000, seed: int = 0,
            weight_seed: int = 1, ranges: RangeSpec | None = None) -> DatasetSplits:
    """Output of a fixed random two-unit sigmoid network over (x1, x2).

    The nine weights are drawn once, uniform in [-2, 2], from weight_seed and
    recorded in provenance.
    """
    spec = ranges or _nnn_ranges(n_train, n_test)
    w = np.random.default_rng(np.random.SeedSequence([int(weight_seed)])).uniform(-2.0, 2.0, 9)
    w11, w12, b1, w21, w22, b2, v1, v2, c = (float(x) for x in w)

    def formula(x1, x2):
        z1 = 1.0 / (1.0 + np.exp(-(w11 * x1 + w12 * x2 + b1)))
        z2 = 1.0 / (1.0 + np.exp(-(w21 * x1 + w22 * x2 + b2)))
        return v1 * z1 + v2 * z2 + c

    extra = {"weights": [float(x) for x in w], "weight_seed": int(weight_seed),
             "ground_truth": nnn_ground_truth(w)}
    return _make_splits(spec, seed, formula, "y", extra=extra)


# --- polymer mixing free energy ---

FHST_GROUND_TRUTH = ("8.314*300.0*(phi/N*log(phi) + (1.0 - phi)*log(1.0 - phi) + "
                     "chi*phi*(1.0 - phi))")


def _fhst_ranges(n_train: int, n_id: int, n_ood: int) -> RangeSpec:
    # OOD extrapolates along the interaction parameter chi
    return RangeSpec(
        variables=(("phi", VarRange(0.05, 0.95)),
                   ("N", VarRange(1, 100, integer=True)),
                   ("chi", VarRange(0.0, 2.0, ood_low=2.5, ood_high=4.0))),
        n_train=n_train, n_test_id=n_id, n_test_ood=n_ood,
    )


def gen_fhst(n_train: int = 10000, n_id: int = 2000, n_ood: int = 2000, seed: int = 0,
             ranges: RangeSpec | None = None) -> DatasetSplits:
    """Gibbs free energy of mixing per lattice site over (phi, N, chi)."""
    spec = ranges or _fhst_ranges(n_train, n_id, n_ood)
    for name, vr in spec.variables:
        if name == "phi" and not (0.0 < vr.low and vr.high < 1.0):
            raise RangeError("fhst needs phi strictly inside (0, 1)")
        if name == "N" and vr.low < 1:
            raise RangeError("fhst needs N >= 1")

    def formula(phi, N, chi):
        return 8.314 * 300.0 * (phi / N * np.log(phi) + (1.0 - phi) * np.log(1.0 - phi)
                                + chi * phi * (1.0 - phi))

    return _make_splits(spec, seed, formula, "dG", extra={"ground_truth": FHST_GROUND_TRUTH})


# --- bacterial growth rate ---

@dataclass(frozen=True)
class EcbgConstants:
    """Defaults are placeholders within plausible ranges; override to match a
    specific data source."""

    mu_max: float = 1.0
    k_s: float = 1.0
    k: float = 0.5
    x0: float = 20.0
    c: float = 1e-4
    x_decay: float = 45.0
    ph_opt: float = 7.0
    ph_min: float = 4.0
    ph_max: float = 10.0


def ecbg_ground_truth(k: EcbgConstants) -> str:
    return (f"{k.mu_max!r}*B*(S/({k.k_s!r} + S))*"
            f"(tanh({k.k!r}*(T - {k.x0!r}))/(1.0 + {k.c!r}*(T - {k.x_decay!r})^4.0))*"
            f"(exp(-abs(pH - {k.ph_opt!r}))*"
            f"sin((pH - {k.ph_min!r})*{_PI!r}/({k.ph_max!r} - {k.ph_min!r}))^2.0)")


def _ecbg_ranges(n_train: int, n_test: int) -> RangeSpec:
    return RangeSpec(
        variables=(("B", VarRange(0.0, 10.0)), ("S", VarRange(0.0, 5.0)),
                   ("T", VarRange(15.0, 45.0)), ("pH", VarRange(4.0, 10.0))),
        n_train=n_train, n_test_id=n_test,
    )


def gen_ecbg(n_train: int = 7500, n_test: int = 2500, seed: int = 0,
             constants: EcbgConstants | None = None,
             ranges: RangeSpec | None = None) -> DatasetSplits:
    """E. coli population growth rate over (B, S, T, pH)."""
    spec = ranges or _ecbg_ranges(n_train, n_test)
    k = constants or EcbgConstants()
    for name, vr in spec.variables:
        if name in ("B", "S") and vr.low < 0:
            raise RangeError(f"ecbg needs {name} >= 0")

    def formula(B, S, T, pH):
        growth = k.mu_max * B * (S / (k.k_s + S))
        temp = np.tanh(k.k * (T - k.x0)) / (1.0 + k.c * (T - k.x_decay) ** 4.0)
        # np.power, not **: the ** operator strength-reduces exponent 2 to a
        # multiply, which need not match the expression evaluator bit-for-bit
        f_ph = np.exp(-np.abs(pH - k.ph_opt)) * np.power(np.sin(
            (pH - k.ph_min) * _PI / (k.ph_max - k.ph_min)), 2.0)
        return growth * temp * f_ph

    extra = {"constants": dict(k.__dict__), "ground_truth": ecbg_ground_truth(k)}
    return _make_splits(spec, seed, formula, "dBdt", extra=extra)


# --- membrane potential dynamics ---

@dataclass(frozen=True)
class HhmConstants:
    """Classic squid-axon textbook values; membrane capacitance is fixed at 1."""

    g_na: float = 120.0
    g_k: float = 36.0
    g_l: float = 0.3
    v_na: float = 50.0
    v_k: float = -77.0
    v_l: float = -54.4
    c_m: float = 1.0


def hhm_ground_truth(k: HhmConstants) -> str:
    return (f"({k.g_na!r}*m^3.0*h*({k.v_na!r} - V) + {k.g_k!r}*n^4.0*({k.v_k!r} - V) + "
            f"{k.g_l!r}*({k.v_l!r} - V) + Iext)/{k.c_m!r}")


def _hhm_ranges(n_train: int, n_id: int, n_ood: int) -> RangeSpec:
    # OOD draws voltage and external current from the extreme ranges
    return RangeSpec(
        variables=(("V", VarRange(-75.0, 35.0, ood_low=-100.0, ood_high=-75.0)),
                   ("m", VarRange(0.0, 1.0)), ("n", VarRange(0.0, 1.0)),
                   ("h", VarRange(0.0, 1.0)),
                   ("Iext", VarRange(0.0, 35.0, ood_low=35.0, ood_high=50.0))),
        n_train=n_train, n_test_id=n_id, n_test_ood=n_ood,
    )


def gen_hhm(n_train: int = 10000, n_id: int = 2000, n_ood: int = 2000, seed: int = 0,
            constants: HhmConstants | None = None,
            ranges: RangeSpec | None = None) -> DatasetSplits:
    """Rate of membrane potential change over (V, m, n, h, Iext)."""
    spec = ranges or _hhm_ranges(n_train, n_id, n_ood)
    k = constants or HhmConstants()
    for name, vr in spec.variables:
        if name in ("m", "n", "h") and not (0.0 <= vr.low and vr.high <= 1.0):
            raise RangeError(f"hhm gating variable {name} must stay in [0, 1]")

    def formula(V, m, n, h, Iext):
        return (k.g_na * m ** 3.0 * h * (k.v_na - V) + k.g_k * n ** 4.0 * (k.v_k - V)
                + k.g_l * (k.v_l - V) + Iext) / k.c_m

    extra = {"constants": dict(k.__dict__), "ground_truth": hhm_ground_truth(k)}
    return _make_splits(spec, seed, formula, "dVdt", extra=extra)
