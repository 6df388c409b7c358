"""Population-based discovery of symbolic governing equations from data."""

__version__ = "0.1.0"

from .data import Dataset, DatasetSplits, Provenance, load_csv
from .discovery import (
    AgentState,
    CollectiveKnowledge,
    DiscoveryEngine,
    RunConfig,
    RunResult,
    discovery_score,
    run,
    select_best_agent,
    update_direction,
)
from .expr import (
    Expression,
    count_params,
    depth,
    evaluate,
    evaluate_batch,
    parse,
    serialize,
)
from .fitting import FitConfig, FitResult, fit_params, sse
from .metrics import MetricReport, abs_error_curve, mae, metric_report, nmse, ood_trace, wmape
from .problem import Hypothesis, ProblemSpec

__all__ = [
    "AgentState", "CollectiveKnowledge", "Dataset", "DatasetSplits",
    "DiscoveryEngine", "Expression", "FitConfig", "FitResult", "Hypothesis",
    "MetricReport", "ProblemSpec", "Provenance", "RunConfig", "RunResult",
    "__version__", "abs_error_curve", "count_params", "depth", "discovery_score",
    "evaluate", "evaluate_batch", "fit_params", "load_csv", "mae", "metric_report",
    "nmse", "ood_trace", "parse", "run", "select_best_agent", "serialize", "sse",
    "update_direction", "wmape",
]
