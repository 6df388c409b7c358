"""Problem specification: what system we are trying to find an equation for."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ValidationError

_PARAM_TOKEN = re.compile(r"^p\d+$")


@dataclass(frozen=True)
class ProblemSpec:
    """Names and context of the target system's inputs and output.

    ``domain_tag`` is the free-text scientific domain handed to the analysis
    backend (e.g. "physics", "polymer science").
    """

    name: str
    var_names: tuple[str, ...]
    output_name: str = "y"
    description: str = ""
    domain_tag: str = "science"

    def __post_init__(self):
        object.__setattr__(self, "var_names", tuple(self.var_names))
        if not self.var_names:
            raise ValidationError("problem spec needs at least one input variable")
        if len(set(self.var_names)) != len(self.var_names):
            raise ValidationError("input variable names must be unique")
        if not self.domain_tag:
            raise ValidationError("domain_tag must be non-empty")
        from .expr.functions import FUNCTIONS  # deferred: avoids import cycle

        for name in self.var_names:
            if _PARAM_TOKEN.match(name):
                raise ValidationError(f"variable name {name!r} collides with parameter tokens")
            if name in FUNCTIONS:
                raise ValidationError(f"variable name {name!r} collides with a built-in function")

    @property
    def arity(self) -> int:
        return len(self.var_names)


@dataclass(frozen=True)
class Hypothesis:
    """Initial frame of the equation; expression text, optionally with ``#`` comment lines."""

    skeleton_text: str

    def __post_init__(self):
        if not self.skeleton_text.strip():
            raise ValidationError("hypothesis must be non-empty")

    def expression_text(self) -> str:
        """Skeleton with comment lines stripped, joined to a single candidate expression."""
        lines = [ln for ln in self.skeleton_text.splitlines() if not ln.strip().startswith("#")]
        return " ".join(ln.strip() for ln in lines if ln.strip())
