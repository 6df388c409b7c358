"""Command-line front end: dataset generation, runs, resume, eval, reports.

Exit codes: 0 success, 2 configuration error, 3 backend error, 4 I/O error.
"""

from __future__ import annotations

import csv
import datetime
import json
import signal
import sys
from pathlib import Path

import click
import numpy as np
import yaml

from . import __version__
from .benchmarks import CATALOG, get_problem, load_tabular
from .data import Dataset, file_checksum, load_csv
from .discovery import DiscoveryEngine, RunConfig, RunResult
from .errors import (
    BackendError,
    CatalogError,
    ConfigError,
    CorruptCheckpoint,
    EqdiscoError,
    IoError,
    MissingLog,
    ParseError,
    SchemaError,
    ValidationError,
    VersionMismatch,
)
from .expr import evaluate_batch, parse
from .fitting import FitConfig, fit_params
from .generators import (
    LlmAnalyst,
    LlmEndpointConfig,
    LlmGenerator,
    MutationGenerator,
    StructuralAnalyst,
)
from .metrics import abs_error_curve, metric_report, ood_trace
from .problem import Hypothesis, ProblemSpec
from .runio import RunLog, read_checkpoint, read_manifest, write_checkpoint, write_manifest

_CONFIG_EXIT = 2
_BACKEND_EXIT = 3
_IO_EXIT = 4


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    """Map package errors onto the documented exit codes."""
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ConfigError, CatalogError, ParseError, ValidationError, SchemaError) as exc:
            _fail(_CONFIG_EXIT, str(exc))
        except BackendError as exc:
            _fail(_BACKEND_EXIT, str(exc))
        except (IoError, MissingLog, VersionMismatch, CorruptCheckpoint) as exc:
            _fail(_IO_EXIT, str(exc))
        except OSError as exc:
            _fail(_IO_EXIT, str(exc))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# --- configuration loading ---

_DEFAULT_CONFIG = {
    "problem": {"name": "custom", "hypothesis": "p0", "output_name": "y",
                "domain": "science"},
    "run": {"seed": 0, "checkpoint_every": 10, "score_mode": "eq1", "sse_norm": False},
    "ablation": {"mode": "none"},
    "backend": {"kind": "mutation"},
    "fit": {},
}


def load_config(path: str | Path) -> dict:
    """Parse and normalize a YAML run configuration."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = yaml.safe_load(path.read_text()) or {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
    cfg = {ns: dict(defaults) for ns, defaults in _DEFAULT_CONFIG.items()}
    for ns, values in raw.items():
        if ns not in cfg:
            raise ConfigError(f"{path}: unknown config namespace {ns!r}")
        if not isinstance(values, dict):
            raise ConfigError(f"{path}: namespace {ns!r} must be a mapping")
        cfg[ns].update(values)
    return cfg


def _resolve_problem(cfg: dict) -> tuple[ProblemSpec, Hypothesis, dict[str, str]]:
    """Problem spec, hypothesis, and dataset paths per split from the config."""
    p = cfg["problem"]
    name = p.get("name", "custom")
    entry = CATALOG.get(name)
    var_names = p.get("var_names") or (entry.var_names if entry else None)
    if not var_names:
        raise ConfigError(f"problem {name!r} is not cataloged; provide problem.var_names")
    spec = ProblemSpec(
        name=name,
        var_names=tuple(var_names),
        output_name=p.get("output_name") or (entry.output_name if entry else "y"),
        description=p.get("description") or (entry.description if entry else ""),
        domain_tag=p.get("domain") or (entry.domain_tag if entry else "science"),
    )
    hyp = Hypothesis(p.get("hypothesis") or "p0")

    paths: dict[str, str] = {}
    if p.get("dataset_dir"):
        base = Path(p["dataset_dir"])
        for split in ("train", "test_id", "test_ood"):
            candidate = base / f"{name}_{split}.csv"
            if candidate.exists():
                paths[split] = str(candidate)
    for split in ("train", "test_id", "test_ood"):
        if p.get(split):
            paths[split] = str(p[split])
    if "train" not in paths:
        raise ConfigError("no training data: set problem.train or problem.dataset_dir")
    for split, sp in paths.items():
        if not Path(sp).exists():
            raise ConfigError(f"dataset path for {split} does not exist: {sp}")
    return spec, hyp, paths


def _resolve_run_config(cfg: dict) -> RunConfig:
    r, a, b, f = cfg["run"], cfg["ablation"], cfg["backend"], cfg["fit"]
    entry = CATALOG.get(cfg["problem"].get("name", ""))
    K = r.get("K") or (entry.default_agents if entry else 50)
    M = r.get("M") or (entry.default_iterations if entry else 100)
    try:
        fit = FitConfig(
            restarts=int(f.get("restarts", 4)),
            max_iters_per_restart=int(f.get("max_iters_per_restart", 100)),
            step_tolerance=float(f.get("step_tolerance", 1e-10)),
            seed=int(f.get("seed", 0)),
        )
        return RunConfig(K=int(K), M=int(M), seed=int(r.get("seed", 0)),
                         backend=str(b.get("kind", "mutation")),
                         ablation=str(a.get("mode", "none")), fit=fit,
                         score_mode=str(r.get("score_mode", "eq1")),
                         sse_norm=bool(r.get("sse_norm", False)))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _build_backends(cfg: dict, run_cfg: RunConfig):
    b = cfg["backend"]
    kind = b.get("kind", "mutation")
    if kind == "mutation":
        return MutationGenerator(seed=run_cfg.seed), StructuralAnalyst()
    if kind == "llm":
        required = ("base_url", "model_name")
        missing = [k for k in required if not b.get(k)]
        if missing:
            raise ConfigError(f"llm backend needs backend.{', backend.'.join(missing)}")
        endpoint = LlmEndpointConfig(
            base_url=str(b["base_url"]),
            model_name=str(b["model_name"]),
            temperature=float(b.get("temperature", 0.8)),
            max_tokens=int(b.get("max_tokens", 512)),
            timeout=float(b.get("timeout", 60.0)),
            retries=int(b.get("retries", 2)),
            api_key_env=str(b.get("api_key_env", "EQDISCO_API_KEY")),
        )
        return (LlmGenerator(endpoint),
                LlmAnalyst(endpoint, temperature=float(b.get("analysis_temperature", 0.3))))
    raise ConfigError(f"unknown backend kind {kind!r}")


def _load_split(path: str, spec: ProblemSpec, split: str) -> Dataset:
    ds = load_csv(path, split=split)
    if tuple(ds.var_names) != tuple(spec.var_names):
        raise ConfigError(
            f"{path}: columns {list(ds.var_names)} do not match problem "
            f"variables {list(spec.var_names)}"
        )
    return ds


# --- run execution ---

def _final_metrics(result: RunResult, spec: ProblemSpec,
                   datasets: dict[str, Dataset]) -> dict:
    expr = parse(result.best.f_best_text, spec)
    out = {}
    for split, ds in datasets.items():
        yhat = evaluate_batch(expr, ds.X, result.best_params)
        try:
            out[split] = metric_report(ds.y, yhat, split=split).to_dict()
        except EqdiscoError as exc:
            out[split] = {"error": str(exc)}
    return out


def execute_run(config: dict, out_dir: str | Path, stop_after: int | None = None,
                engine_state: dict | None = None) -> dict:
    """Run (or resume) a discovery experiment; returns the manifest dict.

    stop_after halts after that iteration without writing a manifest, leaving
    the checkpoint behind — the crash-recovery path uses the same machinery.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec, hyp, paths = _resolve_problem(config)
    run_cfg = _resolve_run_config(config)
    gen, analyst = _build_backends(config, run_cfg)
    datasets = {split: _load_split(p, spec, split) for split, p in paths.items()}
    checksums = {split: file_checksum(p) for split, p in paths.items()}

    engine = DiscoveryEngine(run_cfg, spec, hyp, datasets["train"], gen, analyst)
    if engine_state is not None:
        engine.load_state(engine_state)

    log = RunLog(out_dir / "run.log.jsonl")
    ckpt_path = out_dir / "checkpoint.json"
    every = max(1, int(config["run"].get("checkpoint_every", 10)))
    started = datetime.datetime.now(datetime.timezone.utc).isoformat()

    def flush_checkpoint():
        write_checkpoint(ckpt_path, {"config": config, "engine": engine.state_dict()})

    def on_iteration(eng: DiscoveryEngine, record) -> None:
        log.append(record)
        if record.iteration % every == 0:
            flush_checkpoint()

    previous_sigterm = signal.getsignal(signal.SIGTERM)

    def _sigterm(_signo, _frame):
        raise KeyboardInterrupt

    try:
        signal.signal(signal.SIGTERM, _sigterm)
    except ValueError:
        previous_sigterm = None  # not on the main thread; skip signal wiring

    try:
        result = engine.run(on_iteration=on_iteration, stop_after=stop_after)
    except (KeyboardInterrupt, BackendError):
        flush_checkpoint()
        raise
    finally:
        if previous_sigterm is not None:
            signal.signal(signal.SIGTERM, previous_sigterm)

    flush_checkpoint()
    if stop_after is not None and engine.iteration < run_cfg.M:
        return {"interrupted_at": engine.iteration}

    manifest = {
        "problem": spec.name,
        "config": config,
        "code_version": __version__,
        "dataset_paths": paths,
        "dataset_checksums": checksums,
        "started": started,
        "finished": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "iterations_run": engine.iteration,
        "archive_best": {
            "expr": result.best.f_best_text,
            "params": result.best_params,
            "score": result.best.score,
            "depth": engine.archive.depth,
            "param_count": engine.archive.param_count,
            "explainability": 1.0 / engine.archive.depth,
            "found_at_iteration": engine.archive.iteration,
        },
        "metrics": _final_metrics(result, spec, datasets),
        "ck_reads": result.ck_reads,
        "ck_writes": result.ck_writes,
        "wall_time_s": result.wall_time,
    }
    write_manifest(out_dir / "manifest.json", manifest)
    return manifest


def resume_run(checkpoint_path: str | Path) -> dict | None:
    """Continue an interrupted run from its checkpoint (same output directory)."""
    checkpoint_path = Path(checkpoint_path)
    payload = read_checkpoint(checkpoint_path)
    config = payload["config"]
    state = payload["engine"]
    run_cfg = _resolve_run_config(config)
    if int(state["iteration"]) >= run_cfg.M:
        return None  # already complete
    return execute_run(config, checkpoint_path.parent, engine_state=state)


# --- commands ---

@click.group()
@click.version_option(__version__)
def main():
    """Equation discovery over observation data with a population of agents."""


@main.command("bench-gen")
@click.argument("problem")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", default=".", show_default=True, type=click.Path(file_okay=False))
@click.option("--n-train", type=int, default=None, help="Override training rows.")
@click.option("--n-test", type=int, default=None, help="Override in-distribution test rows.")
@click.option("--n-ood", type=int, default=None, help="Override OOD test rows.")
@_guarded
def cmd_bench_gen(problem, seed, out, n_train, n_test, n_ood):
    """Generate a synthetic benchmark dataset (train/test_id/test_ood files)."""
    entry = get_problem(problem)
    if not entry.synthetic:
        raise CatalogError(
            f"{problem!r} is an empirical dataset; it is ingested from files, not generated"
        )
    kwargs: dict = {"seed": seed}
    overrides = {"n_train": n_train, "n_test": n_test, "n_id": n_test, "n_ood": n_ood,
                 "n": n_train}
    import inspect

    accepted = inspect.signature(entry.generate).parameters
    for key, value in overrides.items():
        if value is not None and key in accepted:
            kwargs[key] = value
    splits = entry.generate(**kwargs)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for split_name, ds in splits.items():
        path = out_dir / f"{problem}_{split_name}.csv"
        checksum = ds.save(path)
        click.echo(f"wrote {path} ({len(ds)} rows, sha256 {checksum[:12]})")


@main.command("run")
@click.argument("config_path", type=click.Path(exists=False))
@click.option("--out", default="runs/latest", show_default=True,
              type=click.Path(file_okay=False))
@click.option("--repeats", default=1, show_default=True, type=int,
              help="Independent repetitions with seeds seed+0..N-1.")
@_guarded
def cmd_run(config_path, out, repeats):
    """Execute a discovery run from a YAML config."""
    config = load_config(config_path)
    if repeats <= 1:
        manifest = execute_run(config, out)
        _echo_outcome(manifest)
        return
    results = []
    base_seed = int(config["run"].get("seed", 0))
    for r in range(repeats):
        rep_config = json.loads(json.dumps(config))
        rep_config["run"]["seed"] = base_seed + r
        manifest = execute_run(rep_config, Path(out) / f"run_{r}")
        results.append(manifest)
        click.echo(f"repeat {r}: seed {base_seed + r} -> "
                   f"score {manifest['archive_best']['score']:.6g}")
    _write_repeat_summary(Path(out), results)


def _echo_outcome(manifest: dict) -> None:
    best = manifest["archive_best"]
    click.echo(f"best equation: {best['expr']}")
    click.echo(f"score {best['score']:.6g} | depth {best['depth']} | "
               f"params {best['param_count']}")
    for split, m in manifest["metrics"].items():
        if "wmape" in m:
            click.echo(f"{split}: WMAPE {m['wmape']:.3e}  NMSE {m['nmse']:.3e}  "
                       f"MAE {m['mae']:.3e}")


def _write_repeat_summary(out_dir: Path, manifests: list[dict]) -> None:
    splits: dict[str, list[float]] = {}
    for man in manifests:
        for split, m in man["metrics"].items():
            if "wmape" in m and np.isfinite(m["wmape"]):
                splits.setdefault(split, []).append(m["wmape"])
    summary = {
        "repeats": len(manifests),
        "wmape": {
            split: {"mean": float(np.mean(vals)), "std": float(np.std(vals))}
            for split, vals in splits.items()
        },
    }
    write_manifest(out_dir / "repeats.json", summary)
    click.echo(json.dumps(summary["wmape"], indent=2, sort_keys=True))


@main.command("resume")
@click.argument("checkpoint_path", type=click.Path(exists=False))
@_guarded
def cmd_resume(checkpoint_path):
    """Continue an interrupted run from its checkpoint."""
    manifest = resume_run(checkpoint_path)
    if manifest is None:
        click.echo("run already complete; nothing to resume")
        return
    _echo_outcome(manifest)


@main.command("eval")
@click.argument("expr_text")
@click.argument("data_path", type=click.Path(exists=False))
@click.option("--params", default=None,
              help="Comma-separated parameter values; fitted on train when omitted.")
@click.option("--out", default=None, type=click.Path(dir_okay=False),
              help="Also write the metric report to this JSON file.")
@click.option("--seed", default=0, show_default=True, type=int,
              help="Fitting seed when parameters are fitted.")
@_guarded
def cmd_eval(expr_text, data_path, params, out, seed):
    """Score an expression against a dataset CSV (or a bench-gen directory)."""
    data_path = Path(data_path)
    if not data_path.exists():
        raise ConfigError(f"dataset path does not exist: {data_path}")
    datasets: dict[str, Dataset] = {}
    if data_path.is_dir():
        stems = sorted(data_path.glob("*_train.csv"))
        if not stems:
            raise ConfigError(f"{data_path}: no *_train.csv found")
        base = stems[0].name[: -len("_train.csv")]
        for split in ("train", "test_id", "test_ood"):
            candidate = data_path / f"{base}_{split}.csv"
            if candidate.exists():
                datasets[split] = load_csv(candidate, split=split)
    else:
        datasets["train"] = load_csv(data_path, split="train")

    any_ds = next(iter(datasets.values()))
    spec = ProblemSpec(name="eval", var_names=any_ds.var_names,
                       output_name=any_ds.output_name)
    expr = parse(expr_text, spec)

    if params is not None:
        values = [float(v) for v in params.split(",")] if params.strip() else []
        if len(values) != expr.param_count:
            raise ConfigError(
                f"expression has {expr.param_count} parameter slots, got {len(values)}"
            )
    else:
        fit = fit_params(expr, datasets["train"], FitConfig(seed=seed))
        values = fit.params_list()
        if values:
            click.echo("fitted parameters: "
                       + ", ".join(f"p{i}={v:.8g}" for i, v in enumerate(values)))

    reports = {}
    for split, ds in datasets.items():
        yhat = evaluate_batch(expr, ds.X, values)
        report = metric_report(ds.y, yhat, split=split)
        reports[split] = report.to_dict()
        click.echo(f"{split}: WMAPE {report.wmape:.6e}  NMSE {report.nmse:.6e}  "
                   f"MAE {report.mae:.6e}  (n={report.n}, nonfinite={report.nonfinite})")
    if out:
        write_manifest(out, {"expr": expr_text, "params": values, "metrics": reports})


@main.command("report")
@click.argument("run_dir", type=click.Path(exists=False))
@_guarded
def cmd_report(run_dir):
    """Emit CSV data files and a text summary for a completed run."""
    run_dir = Path(run_dir)
    manifest_path = run_dir / "manifest.json"
    if not manifest_path.exists():
        raise MissingLog(f"{run_dir}: no manifest.json (run incomplete?)")
    manifest = read_manifest(manifest_path)
    records = RunLog(run_dir / "run.log.jsonl").read_all()

    conv_path = run_dir / "convergence.csv"
    with open(conv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "generation_best_score", "archive_best_score"])
        for rec in records:
            writer.writerow([rec.iteration, repr(rec.generation_best[1]),
                             repr(rec.archive_best_score)])

    paths = manifest.get("dataset_paths", {})
    spec = None
    wrote = [str(conv_path)]

    if "test_ood" in paths and Path(paths["test_ood"]).exists():
        ood = load_csv(paths["test_ood"], split="test_ood")

        class _Result:
            per_iteration = records

        trace = ood_trace(_Result(), ood)
        trace_path = run_dir / "ood_trace.csv"
        with open(trace_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "ood_wmape"])
            for iteration, value in trace:
                writer.writerow([iteration, repr(value)])
        wrote.append(str(trace_path))

    eval_split = "test_id" if "test_id" in paths else "train"
    if eval_split in paths and Path(paths[eval_split]).exists():
        ds = load_csv(paths[eval_split], split=eval_split)
        spec = ProblemSpec(name="report", var_names=ds.var_names,
                           output_name=ds.output_name)
        best = manifest["archive_best"]
        expr = parse(best["expr"], spec)
        for var in ds.var_names:
            curve = abs_error_curve(expr, best["params"], ds, var)
            curve_path = run_dir / f"abs_error_{var}.csv"
            with open(curve_path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow([var, "abs_error", "finite"])
                for x, err, ok in curve:
                    writer.writerow([repr(x), repr(err), int(ok)])
            wrote.append(str(curve_path))

    summary_path = run_dir / "summary.txt"
    best = manifest["archive_best"]
    lines = [
        f"problem: {manifest['problem']}",
        f"iterations: {manifest['iterations_run']}",
        f"best equation: {best['expr']}",
        f"parameters: {best['params']}",
        f"discovery score: {best['score']}",
        f"depth: {best['depth']}  param_count: {best['param_count']}  "
        f"explainability (1/depth): {best['explainability']:.4g}",
        f"collective knowledge reads/writes: "
        f"{manifest['ck_reads']}/{manifest['ck_writes']}",
    ]
    for split, m in manifest["metrics"].items():
        if "wmape" in m:
            lines.append(f"{split}: WMAPE={m['wmape']:.6e} NMSE={m['nmse']:.6e} "
                         f"MAE={m['mae']:.6e} n={m['n']}")
    summary_path.write_text("\n".join(lines) + "\n")
    wrote.append(str(summary_path))
    for path in wrote:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
