"""Pluggable proposal and analysis backends: live endpoint or seeded mutation."""

from .base import AnalystBackend, GeneratorBackend
from .llm import LlmAnalyst, LlmEndpointConfig, LlmGenerator, extract_expression, llm_complete
from .mutation import (
    OVERESTIMATION,
    UNDERESTIMATION,
    MutationGenerator,
    StructuralAnalyst,
    analyze_stub,
    mutate,
)
from .prompts import (
    TEMPLATES,
    PromptTemplate,
    describe_problem,
    grammar_reference,
    render_prompt,
)

__all__ = [
    "AnalystBackend", "GeneratorBackend", "LlmAnalyst", "LlmEndpointConfig",
    "LlmGenerator", "MutationGenerator", "OVERESTIMATION", "PromptTemplate",
    "StructuralAnalyst", "TEMPLATES", "UNDERESTIMATION", "analyze_stub",
    "describe_problem", "extract_expression", "grammar_reference", "llm_complete",
    "mutate", "render_prompt",
]
