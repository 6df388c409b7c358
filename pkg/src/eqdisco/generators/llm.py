"""Chat-completion HTTP backend speaking the open inference-server protocol.

Wire contract: POST {base_url}/v1/chat/completions with a JSON body of
``model``, ``messages`` ([{role, content}]), ``temperature`` and
``max_tokens``; bearer authentication from the environment variable named in
the endpoint config. The first choice's message content is the completion.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass

import requests

from ..errors import (
    EmptyCompletion,
    HttpStatusError,
    NoExpressionFound,
    TransportError,
)
from ..expr.parser import parses_syntactically
from ..problem import Hypothesis, ProblemSpec
from .prompts import TEMPLATES, describe_problem, grammar_reference, render_prompt

_FENCE_RE = re.compile(r"```[^\n`]*\n?(.*?)```", re.DOTALL)


@dataclass(frozen=True)
class LlmEndpointConfig:
    base_url: str
    model_name: str
    temperature: float = 0.8
    max_tokens: int = 512
    timeout: float = 60.0
    retries: int = 2
    api_key_env: str = "EQDISCO_API_KEY"

    def __post_init__(self):
        if not 0.0 <= self.temperature <= 2.0:
            raise ValueError("temperature must lie in [0, 2]")
        if self.retries < 0 or self.retries > 5:
            raise ValueError("retries must lie in [0, 5]")
        if self.timeout <= 0 or self.max_tokens <= 0:
            raise ValueError("timeout and max_tokens must be positive")


def llm_complete(cfg: LlmEndpointConfig, prompt: str,
                 temperature: float | None = None) -> str:
    """One chat completion with exponential backoff on timeouts and 5xx."""
    url = cfg.base_url.rstrip("/") + "/v1/chat/completions"
    headers = {"Content-Type": "application/json"}
    key = os.environ.get(cfg.api_key_env, "")
    if key:
        headers["Authorization"] = f"Bearer {key}"
    body = {
        "model": cfg.model_name,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": cfg.temperature if temperature is None else temperature,
        "max_tokens": cfg.max_tokens,
    }
    attempts = 0
    delay = 1.0
    last_error = "no attempt made"
    while attempts <= cfg.retries:
        attempts += 1
        try:
            resp = requests.post(url, json=body, headers=headers, timeout=cfg.timeout)
        except requests.Timeout:
            last_error = "request timed out"
        except requests.RequestException as exc:
            last_error = f"transport failure: {exc}"
        else:
            if resp.status_code >= 500:
                last_error = f"server error {resp.status_code}"
            elif resp.status_code != 200:
                raise HttpStatusError(resp.status_code, resp.text)
            else:
                try:
                    content = resp.json()["choices"][0]["message"]["content"]
                except (ValueError, KeyError, IndexError, TypeError) as exc:
                    raise EmptyCompletion(f"malformed completion payload: {exc}") from exc
                if not content or not content.strip():
                    raise EmptyCompletion("assistant returned empty text")
                return content
        if attempts <= cfg.retries:
            time.sleep(delay)
            delay *= 2.0
    raise TransportError(last_error, attempts)


def extract_expression(completion: str) -> str:
    """Candidate expression from a completion.

    The first fenced block wins; otherwise the first non-empty line that is
    grammatical (unknown identifiers read as variables).
    """
    m = _FENCE_RE.search(completion)
    if m:
        text = m.group(1).strip()
        if text:
            return text
    for line in completion.splitlines():
        line = line.strip()
        if line and parses_syntactically(line):
            return line
    raise NoExpressionFound("completion contains no usable expression")


class LlmGenerator:
    """Hypothesis-generation backend over a live chat-completion endpoint."""

    max_concurrent = 4

    def __init__(self, cfg: LlmEndpointConfig):
        self.cfg = cfg

    def initial(self, spec: ProblemSpec, hyp: Hypothesis, agent_id: int = 0,
                feedback: str | None = None) -> str:
        prompt = render_prompt(TEMPLATES["initial_generation"], {
            "PROBLEM_SPEC": describe_problem(spec),
            "HYPOTHESIS": hyp.skeleton_text,
            "GRAMMAR_REFERENCE": grammar_reference(spec.var_names),
        })
        if feedback:
            prompt += f"\nYour previous reply was rejected: {feedback}\n"
        return extract_expression(llm_complete(self.cfg, prompt))

    def revise(self, state, ck, direction: str, feedback: str | None = None) -> str:
        current = state.expr.text
        if ck is not None:
            best, analysis = ck.f_best_text, ck.analysis_text
        else:
            # single-agent mode: no shared memory, revise against own state
            best, analysis = current, "n/a (single-agent mode)"
        prompt = render_prompt(TEMPLATES["ast_update"], {
            "CURRENT_EXPR": current,
            "BEST_EQUATION": best,
            "ANALYSIS": analysis,
            "UPDATE_DIRECTION": direction,
            "GRAMMAR_REFERENCE": grammar_reference(state.expr.var_names),
        })
        if feedback:
            prompt += f"\nYour previous reply was rejected: {feedback}\n"
        return extract_expression(llm_complete(self.cfg, prompt))

    def health(self) -> bool:
        url = self.cfg.base_url.rstrip("/") + "/v1/models"
        try:
            resp = requests.get(url, timeout=self.cfg.timeout)
        except requests.RequestException:
            return False
        return resp.status_code == 200


class LlmAnalyst:
    """Domain-specialist analysis backend over the same endpoint."""

    def __init__(self, cfg: LlmEndpointConfig, temperature: float = 0.3):
        self.cfg = cfg
        self.temperature = temperature

    def analyze(self, f_best_text: str, domain_tag: str) -> str:
        prompt = render_prompt(TEMPLATES["program_analysis"], {
            "DOMAIN": domain_tag,
            "BEST_EQUATION": f_best_text,
        })
        text = llm_complete(self.cfg, prompt, temperature=self.temperature)
        return text.strip()
