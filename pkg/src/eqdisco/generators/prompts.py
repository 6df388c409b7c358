"""Structured prompt templates for the three reasoning calls.

The exact wording is this package's interpretation; the binding slots carry
the information each call needs (problem spec + hypothesis for initial
generation, domain for analysis, shared best equation / analysis / residual
direction for the update). Each rendered prompt demands a single fenced block
so the completion can be extracted mechanically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import MissingBinding
from ..expr.functions import FUNCTION_NAMES

_PLACEHOLDER_RE = re.compile(r"\{([A-Z_]+)\}")

INITIAL_GENERATION_TEMPLATE = """\
You are designing a candidate equation for a scientific system.

Problem specification:
{PROBLEM_SPEC}

Starting hypothesis (a frame you may refine or replace):
{HYPOTHESIS}

{GRAMMAR_REFERENCE}

Propose one candidate equation for the output in terms of the input variables.
Use p0, p1, ... for unknown constants; they will be fitted to the data.
Reply with exactly one fenced code block containing a single expression and
nothing else.
"""

PROGRAM_ANALYSIS_TEMPLATE = """\
You are a domain specialist in {DOMAIN}.

Current best candidate equation:
{BEST_EQUATION}

Explain the logical structure of this equation and the physical meaning of
each term for the target system. Note which terms dominate in which regimes
and what the fitted constants might represent. Be concise and concrete.
"""

AST_UPDATE_TEMPLATE = """\
You are revising your candidate equation for a scientific system.

Your current equation:
{CURRENT_EXPR}

Best equation found by the group so far:
{BEST_EQUATION}

Specialist analysis of the best equation:
{ANALYSIS}

On the training data your current equation suffers from {UPDATE_DIRECTION} of
the target values.

{GRAMMAR_REFERENCE}

Propose one improved equation: borrow structure from the best equation,
simplify your own, or correct the bias named above. Use p0, p1, ... for
unknown constants. Reply with exactly one fenced code block containing a
single expression and nothing else.
"""


@dataclass(frozen=True)
class PromptTemplate:
    kind: str  # "initial_generation" | "program_analysis" | "ast_update"
    text: str

    def __post_init__(self):
        counts: dict[str, int] = {}
        for name in _PLACEHOLDER_RE.findall(self.text):
            counts[name] = counts.get(name, 0) + 1
        dupes = [n for n, c in counts.items() if c > 1]
        if dupes:
            raise ValueError(f"placeholders must appear exactly once, repeated: {dupes}")
        object.__setattr__(self, "_placeholders", tuple(counts))

    @property
    def placeholders(self) -> tuple[str, ...]:
        return self._placeholders


TEMPLATES = {
    "initial_generation": PromptTemplate("initial_generation", INITIAL_GENERATION_TEMPLATE),
    "program_analysis": PromptTemplate("program_analysis", PROGRAM_ANALYSIS_TEMPLATE),
    "ast_update": PromptTemplate("ast_update", AST_UPDATE_TEMPLATE),
}


def render_prompt(tmpl: PromptTemplate, bindings: dict[str, str]) -> str:
    """Substitute every placeholder of the template; empty bindings count as missing.

    Single-pass substitution, so binding values are never rescanned for
    placeholders of their own.
    """
    def sub(match: re.Match) -> str:
        name = match.group(1)
        if name not in tmpl.placeholders:
            return match.group(0)
        value = bindings.get(name)
        if value is None or value == "":
            raise MissingBinding(name)
        return value

    return _PLACEHOLDER_RE.sub(sub, tmpl.text)


def grammar_reference(var_names) -> str:
    """Grammar cheat-sheet embedded in generation prompts."""
    return (
        "Expression grammar:\n"
        f"- input variables: {', '.join(var_names)}\n"
        "- learnable constants: p0, p1, ... (kept to a minimum)\n"
        "- operators by precedence: ^ (power, right-associative), unary -, "
        "* and /, + and -\n"
        f"- functions (one argument each): {', '.join(FUNCTION_NAMES)}\n"
        "- numeric literals are fixed constants; parentheses group as usual\n"
        "- no control flow, no assignments: a single expression only"
    )


def describe_problem(spec) -> str:
    """Problem-specification block for the initial-generation prompt."""
    lines = [f"- input variables: {', '.join(spec.var_names)}",
             f"- output variable: {spec.output_name}"]
    if spec.description:
        lines.append(f"- system: {spec.description}")
    lines.append(f"- scientific domain: {spec.domain_tag}")
    return "\n".join(lines)
