"""Sampling ranges and train / in-distribution / out-of-distribution split plans."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import RangeError

_SPLIT_INDEX = {"train": 0, "test_id": 1, "test_ood": 2}


@dataclass(frozen=True)
class VarRange:
    """Closed training interval for one variable, plus an optional disjoint OOD interval."""

    low: float
    high: float
    integer: bool = False
    ood_low: float | None = None
    ood_high: float | None = None

    def __post_init__(self):
        if not self.low <= self.high:
            raise RangeError(f"empty interval [{self.low}, {self.high}]")
        if (self.ood_low is None) != (self.ood_high is None):
            raise RangeError("OOD interval needs both endpoints")
        if self.ood_low is not None:
            if not self.ood_low <= self.ood_high:
                raise RangeError(f"empty OOD interval [{self.ood_low}, {self.ood_high}]")
            if max(self.low, self.ood_low) < min(self.high, self.ood_high):
                raise RangeError(
                    f"OOD interval [{self.ood_low}, {self.ood_high}] overlaps "
                    f"training interval [{self.low}, {self.high}]"
                )

    @property
    def has_ood(self) -> bool:
        return self.ood_low is not None


@dataclass(frozen=True)
class RangeSpec:
    """Per-variable intervals and per-split sample counts for one problem."""

    variables: tuple[tuple[str, VarRange], ...]
    n_train: int
    n_test_id: int
    n_test_ood: int = 0

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if self.n_test_ood > 0 and not any(vr.has_ood for _, vr in self.variables):
            raise RangeError("an OOD split needs at least one variable with a disjoint interval")

    def var_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.variables)

    def to_dict(self) -> dict:
        out = {}
        for name, vr in self.variables:
            entry = {"low": vr.low, "high": vr.high, "integer": vr.integer}
            if vr.has_ood:
                entry["ood"] = [vr.ood_low, vr.ood_high]
            out[name] = entry
        return out


@dataclass(frozen=True)
class SamplingPlan:
    split: str
    count: int
    # (name, low, high, integer, guard_outside_train) per variable
    intervals: tuple[tuple[str, float, float, bool, tuple[float, float] | None], ...]
    seed_key: tuple[int, ...]


def split_id_ood(spec: RangeSpec, seed: int):
    """Sampling plans for the three splits.

    Train and test_id share intervals but use disjoint RNG substreams; the OOD
    plan swaps in the disjoint intervals for every variable that declares one.
    """
    plans = []
    for split, count in (("train", spec.n_train), ("test_id", spec.n_test_id),
                         ("test_ood", spec.n_test_ood)):
        if count == 0 and split == "test_ood":
            plans.append(None)
            continue
        intervals = []
        for name, vr in spec.variables:
            if split == "test_ood" and vr.has_ood:
                intervals.append((name, vr.ood_low, vr.ood_high, vr.integer,
                                  (vr.low, vr.high)))
            else:
                intervals.append((name, vr.low, vr.high, vr.integer, None))
        plans.append(SamplingPlan(split=split, count=count, intervals=tuple(intervals),
                                  seed_key=(int(seed), _SPLIT_INDEX[split])))
    return tuple(plans)


def sample_plan(plan: SamplingPlan) -> np.ndarray:
    """Draw the plan's input matrix; deterministic in the plan's seed key."""
    rng = np.random.default_rng(np.random.SeedSequence(list(plan.seed_key)))
    cols = []
    for name, low, high, integer, train_guard in plan.intervals:
        if integer:
            col = rng.integers(int(low), int(high) + 1, size=plan.count).astype(np.float64)
        else:
            col = rng.uniform(low, high, size=plan.count)
        if train_guard is not None:
            # uniform() is half-open, but nudge any boundary hit so every OOD
            # row is strictly outside the training interval
            t_low, t_high = train_guard
            inside = (col >= t_low) & (col <= t_high)
            if np.any(inside):
                col = np.where(inside & (col <= t_low), np.nextafter(t_low, -np.inf), col)
                col = np.where(inside & (col >= t_high), np.nextafter(t_high, np.inf), col)
        cols.append(col)
    return np.column_stack(cols)
