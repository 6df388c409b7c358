"""The discovery loop: agent population, complexity-aware scoring, shared memory.

Every iteration each agent proposes an expression (from the problem spec and
hypothesis on iteration 1, from its own state plus the shared knowledge
afterwards), the proposal is parsed, parameter-fitted and scored, the best
agent's equation is analyzed and deposited as collective knowledge, and an
all-time-best archive tracks the incumbent. The archive is what gets
returned: the per-generation best may regress, the incumbent never does.

Determinism: every random draw keys on (master seed, agent id, iteration), so
results are independent of agent scheduling; the engine state serializes to a
plain dict for bit-compatible checkpoint and resume.
"""

from __future__ import annotations

import concurrent.futures
import hashlib
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .data import Dataset
from .errors import (
    BackendError,
    EmptyCompletion,
    HttpStatusError,
    NoExpressionFound,
    ParseError,
    TransportError,
    ValidationError,
)
from .expr import Expression, evaluate_batch, parse
from .fitting import FitConfig, FitResult, fit_params
from .generators.mutation import OVERESTIMATION, UNDERESTIMATION
from .problem import Hypothesis, ProblemSpec
from .runio import IterationRecord

SENTINEL_SCORE = float("-inf")  # ordered below every finite score

FALLBACK_EXPRESSION = "p0"  # always parseable; fits to the target mean


@dataclass
class AgentState:
    """One agent's local memory: current expression, fit, and score."""

    agent_id: int
    expr: Expression
    params: list[float]
    score: float
    history_len: int = 0


@dataclass(frozen=True)
class CollectiveKnowledge:
    """Shared tuple of the best equation and its natural-language analysis."""

    f_best_text: str
    analysis_text: str
    score: float
    iteration: int


@dataclass(frozen=True)
class RunConfig:
    """Engine knobs. msi ablation forces a single agent and no shared memory;
    the no_ast ablation scores by raw error alone."""

    K: int = 50
    M: int = 100
    seed: int = 0
    backend: str = "mutation"  # "mutation" | "llm"
    ablation: str = "none"     # "none" | "msi" | "no_ast"
    fit: FitConfig = field(default_factory=FitConfig)
    score_mode: str = "eq1"    # "eq1" | "sse_only"
    sse_norm: bool = False

    def __post_init__(self):
        if self.K < 1 or self.M < 1:
            raise ValueError("K and M must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.ablation not in ("none", "msi", "no_ast"):
            raise ValueError(f"unknown ablation {self.ablation!r}")
        if self.score_mode not in ("eq1", "sse_only"):
            raise ValueError(f"unknown score_mode {self.score_mode!r}")
        if self.ablation == "msi":
            object.__setattr__(self, "K", 1)
        if self.ablation == "no_ast":
            object.__setattr__(self, "score_mode", "sse_only")


@dataclass
class RunResult:
    best: CollectiveKnowledge
    best_params: list[float]
    per_iteration: list[IterationRecord]
    wall_time: float
    ck_reads: int
    ck_writes: int


def discovery_score(expr: Expression, params, data: Dataset, *,
                    score_mode: str = "eq1", sse_norm: bool = False) -> float:
    """Negated total of fit error plus structural complexity; higher is better.

    eq1: -(SSE + depth + parameter count). sse_only drops the complexity
    terms. A non-finite SSE maps to the sentinel-worst score.
    """
    from .fitting import sse as _sse

    value = _sse(expr, data, params)
    if not math.isfinite(value):
        return SENTINEL_SCORE
    if sse_norm:
        value = value / len(data)
    if score_mode == "sse_only":
        return -value
    return -(value + expr.depth + expr.param_count)


def select_best_agent(agents: list[AgentState]) -> int:
    """Index of the highest-scoring agent; ties go to the lowest agent id."""
    if not agents:
        raise ValueError("no agents to select from")
    best = agents[0]
    for a in agents[1:]:
        if a.score > best.score:
            best = a
    return best.agent_id


def update_direction(residuals) -> str:
    """Overestimation if mean(predicted - truth) > 0, else underestimation."""
    r = np.asarray(residuals, dtype=np.float64)
    if r.size == 0:
        raise ValueError("need at least one residual")
    mean = float(np.mean(r))
    return OVERESTIMATION if mean > 0 else UNDERESTIMATION


class SharedMemoryProbe:
    """Collective-knowledge store that counts every read and write."""

    def __init__(self):
        self.ck: CollectiveKnowledge | None = None
        self.reads = 0
        self.writes = 0

    def read(self) -> CollectiveKnowledge | None:
        self.reads += 1
        return self.ck

    def deposit(self, ck: CollectiveKnowledge) -> None:
        self.writes += 1
        self.ck = ck


@dataclass
class _Archive:
    expr_text: str
    params: list[float]
    score: float
    iteration: int
    depth: int
    param_count: int


class DiscoveryEngine:
    """Stepwise engine over the discovery loop; checkpointable between iterations."""

    STATE_VERSION = 1

    def __init__(self, cfg: RunConfig, spec: ProblemSpec, hyp: Hypothesis,
                 train: Dataset, gen, analyst):
        if len(train) == 0:
            raise ValueError("training dataset is empty")
        self.cfg = cfg
        self.spec = spec
        self.hyp = hyp
        self.train = train
        self.gen = gen
        self.analyst = analyst
        self.memory = SharedMemoryProbe()
        self.iteration = 0
        self.agents: list[AgentState] | None = None
        self.archive: _Archive | None = None
        self.records: list[IterationRecord] = []
        self._msi = cfg.ablation == "msi"

    # --- state (de)serialization for checkpointing ---

    def state_dict(self) -> dict:
        def agent_dict(a: AgentState) -> dict:
            return {"agent_id": a.agent_id, "expr": a.expr.text,
                    "params": a.params, "score": a.score,
                    "history_len": a.history_len}

        return {
            "version": self.STATE_VERSION,
            "iteration": self.iteration,
            "agents": [agent_dict(a) for a in self.agents] if self.agents else None,
            "archive": dict(self.archive.__dict__) if self.archive else None,
            "ck": dict(self.memory.ck.__dict__) if self.memory.ck else None,
            "ck_reads": self.memory.reads,
            "ck_writes": self.memory.writes,
        }

    def load_state(self, state: dict) -> None:
        self.iteration = int(state["iteration"])
        if state["agents"] is not None:
            self.agents = [
                AgentState(agent_id=a["agent_id"],
                           expr=parse(a["expr"], self.spec),
                           params=[float(p) for p in a["params"]],
                           score=float(a["score"]),
                           history_len=int(a["history_len"]))
                for a in state["agents"]
            ]
        if state["archive"] is not None:
            self.archive = _Archive(**state["archive"])
        if state["ck"] is not None:
            self.memory.ck = CollectiveKnowledge(**state["ck"])
        self.memory.reads = int(state["ck_reads"])
        self.memory.writes = int(state["ck_writes"])

    # --- one iteration ---

    def _fit_config(self, agent_id: int, iteration: int) -> FitConfig:
        # per-call fit seed so parallel schedules cannot change results
        digest = hashlib.sha256(
            f"{self.cfg.seed}:{agent_id}:{iteration}:fit".encode()
        ).digest()
        return replace(self.cfg.fit, seed=int.from_bytes(digest[:8], "big"))

    def _score(self, expr: Expression, params) -> float:
        return discovery_score(expr, params, self.train,
                               score_mode=self.cfg.score_mode,
                               sse_norm=self.cfg.sse_norm)

    def _propose_text(self, agent_id: int, iteration: int) -> str:
        """Generation call with parse-failure retries; may raise BackendError."""
        feedback = None
        for _ in range(3):
            try:
                if iteration == 1:
                    text = self.gen.initial(self.spec, self.hyp, agent_id=agent_id,
                                            feedback=feedback)
                else:
                    state = self.agents[agent_id]
                    ck = self.memory.read() if not self._msi else None
                    direction = self._direction(state)
                    text = self.gen.revise(state, ck, direction, feedback=feedback)
            except NoExpressionFound as exc:
                feedback = str(exc)
                continue
            except (TransportError, HttpStatusError, EmptyCompletion) as exc:
                raise BackendError(f"generation backend failed: {exc}") from exc
            try:
                parse(text, self.spec)
                return text
            except (ParseError, ValidationError) as exc:
                feedback = f"{text!r} -> {exc}"
        return ""  # exhausted: caller keeps the previous state

    def _direction(self, state: AgentState) -> str:
        yhat = evaluate_batch(state.expr, self.train.X, state.params)
        finite = np.isfinite(yhat)
        residuals = np.where(finite, yhat - self.train.y, 0.0)
        return update_direction(residuals)

    def _evaluate_proposal(self, agent_id: int, iteration: int,
                           text: str) -> AgentState | None:
        if not text:
            return None
        expr = parse(text, self.spec)
        fit = fit_params(expr, self.train, self._fit_config(agent_id, iteration))
        score = self._score(expr, fit.params_list()) if math.isfinite(fit.sse) \
            else SENTINEL_SCORE
        prev = self.agents[agent_id] if self.agents else None
        return AgentState(agent_id=agent_id, expr=expr, params=fit.params_list(),
                          score=score, history_len=prev.history_len if prev else 0)

    def _fallback_state(self, agent_id: int) -> AgentState:
        """Iteration-1 fallback when a backend cannot produce a valid proposal."""
        for text in (self.hyp.expression_text(), FALLBACK_EXPRESSION):
            try:
                state = self._evaluate_proposal(agent_id, 1, text)
                if state is not None:
                    return state
            except (ParseError, ValidationError):
                continue
        raise BackendError("no valid initial expression, even the fallback")

    def step(self) -> IterationRecord:
        """Run one full iteration (propose, fit, score, consolidate)."""
        t0 = time.perf_counter()
        m = self.iteration + 1
        if m == 1:
            self.agents = [None] * self.cfg.K  # filled below

        max_workers = min(self.cfg.K, getattr(self.gen, "max_concurrent", 1))
        ids = list(range(self.cfg.K))
        if max_workers > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers) as pool:
                texts = list(pool.map(lambda k: self._propose_text(k, m), ids))
        else:
            texts = [self._propose_text(k, m) for k in ids]

        new_states: list[AgentState] = []
        for k, text in zip(ids, texts):
            state = self._evaluate_proposal(k, m, text) if text else None
            if state is None:
                state = self._fallback_state(k) if m == 1 else self.agents[k]
            new_states.append(state)
        self.agents = new_states

        best_id = select_best_agent(self.agents)
        gen_best = self.agents[best_id]
        if self.archive is None or gen_best.score > self.archive.score:
            self.archive = _Archive(expr_text=gen_best.expr.text,
                                    params=list(gen_best.params),
                                    score=gen_best.score, iteration=m,
                                    depth=gen_best.expr.depth,
                                    param_count=gen_best.expr.param_count)

        digest = ""
        if not self._msi:
            analysis = self.analyst.analyze(self.archive.expr_text, self.spec.domain_tag)
            self.memory.deposit(CollectiveKnowledge(
                f_best_text=self.archive.expr_text, analysis_text=analysis,
                score=self.archive.score, iteration=m))
            digest = hashlib.sha256(analysis.encode()).hexdigest()[:12]

        for a in self.agents:
            a.history_len += 1
        self.iteration = m

        record = IterationRecord(
            iteration=m,
            agents=[(a.agent_id, a.expr.text, a.score) for a in self.agents],
            generation_best=(best_id, gen_best.score),
            archive_best_expr=self.archive.expr_text,
            archive_best_score=self.archive.score,
            archive_best_params=list(self.archive.params),
            ck_analysis_digest=digest,
            wall_ms=(time.perf_counter() - t0) * 1e3,
        )
        self.records.append(record)
        return record

    # --- full run ---

    def run(self, on_iteration=None, stop_after: int | None = None) -> RunResult:
        """Iterate to the configured budget; optionally halt early (crash simulation)."""
        t0 = time.perf_counter()
        if self.iteration < self.cfg.M and not self.gen.health():
            raise BackendError("generation backend failed its health check")
        while self.iteration < self.cfg.M:
            record = self.step()
            if on_iteration is not None:
                on_iteration(self, record)
            if stop_after is not None and self.iteration >= stop_after:
                break
        return self.result(wall_time=time.perf_counter() - t0)

    def result(self, wall_time: float = 0.0) -> RunResult:
        if self.archive is None:
            raise BackendError("run produced no iterations")
        if self.memory.ck is not None:
            best_ck = self.memory.ck
        else:
            # single-agent mode never deposits; package the archive directly
            analysis = self.analyst.analyze(self.archive.expr_text, self.spec.domain_tag)
            best_ck = CollectiveKnowledge(f_best_text=self.archive.expr_text,
                                          analysis_text=analysis,
                                          score=self.archive.score,
                                          iteration=self.archive.iteration)
        return RunResult(best=best_ck, best_params=list(self.archive.params),
                         per_iteration=list(self.records), wall_time=wall_time,
                         ck_reads=self.memory.reads, ck_writes=self.memory.writes)


def run(cfg: RunConfig, spec: ProblemSpec, hyp: Hypothesis, train: Dataset,
        gen, analyst, on_iteration=None) -> RunResult:
    """Convenience wrapper: build an engine and run it to completion."""
    return DiscoveryEngine(cfg, spec, hyp, train, gen, analyst).run(on_iteration)
