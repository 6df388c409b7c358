"""Backend interfaces for hypothesis generation and equation analysis."""

from __future__ import annotations

from typing import Protocol, runtime_checkable


@runtime_checkable
class GeneratorBackend(Protocol):
    """Produces candidate expression text for agents.

    ``max_concurrent`` advertises how many calls may be in flight at once;
    randomness (if any) must key on the agent identity carried by the call so
    results do not depend on scheduling.
    """

    max_concurrent: int

    def initial(self, spec, hyp, agent_id: int = 0, feedback: str | None = None) -> str: ...

    def revise(self, state, ck, direction: str, feedback: str | None = None) -> str: ...

    def health(self) -> bool: ...


@runtime_checkable
class AnalystBackend(Protocol):
    """Explains the current best equation in domain terms."""

    def analyze(self, f_best_text: str, domain_tag: str) -> str: ...
