from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict

from ..channel.cfr import generate_cfr, noise_power, subband_frequencies
from ..channel.deployment import generate_deployment
from ..channel.models import ChannelTensor, DeploymentConfig
from ..channel.storage import save_channels, strongest_links, write_gain_csv
from ..clustering import ClusterMap, save_cluster_csv, select_serving_aps
from ..config import freqalloc_settings
from ..objective.problem import AllocationProblem
from ..optim.aquila import ao_optimize
from ..optim.ddpg import DdpgHyper, ddpg_train
from ..optim.env import AllocationEnv
from ..optim.hybrid import hybrid_train
from ..optim.trace import TrainTrace
from ..optim.tuning import TrialSummary, TuningRanges, ddpg_trainer, random_search
from ..phy.assignment import Assignment
from ..phy.precoding import equal_power
from .config import SOLVERS, ExperimentConfig
from .metrics import rows_from_trace, write_metrics_csv, write_table_csv

logger = logging.getLogger(__name__)

SUMMARY_HEADER = [
    "solver",
    "runs",
    "failures",
    "final_objective_mean",
    "final_objective_std",
    "final_total_se_mean",
    "final_total_se_std",
    "final_gini_mean",
    "final_gini_std",
    "final_lambda_min_mean",
    "final_lambda_min_std",
    "mean_wall_ms",
]
SWEEP_AXES = {"ues": "num_ues", "subbands": "num_subbands"}


class SolverFailure(BaseModel):
    solver: str
    seed: int
    error: str


class SolverSummary(BaseModel):
    solver: str
    runs: int
    failures: int
    final_objective_mean: float | None = None
    final_objective_std: float | None = None
    final_total_se_mean: float | None = None
    final_total_se_std: float | None = None
    final_gini_mean: float | None = None
    final_gini_std: float | None = None
    final_lambda_min_mean: float | None = None
    final_lambda_min_std: float | None = None
    mean_wall_ms: float | None = None


class SeedOutcome(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    seed: int
    instance_hash: str | None = None
    traces: dict[str, TrainTrace] = {}
    wall_ms: dict[str, float] = {}
    failures: list[SolverFailure] = []


class CompareResult(BaseModel):
    out_dir: Path
    csv_paths: dict[str, Path]
    summary_path: Path
    summaries: list[SolverSummary]
    failures: list[SolverFailure]


class SweepPoint(BaseModel):
    value: int
    seed: int
    final_total_se: float | None = None
    final_objective: float | None = None
    final_gini: float | None = None
    capacity_flag: bool = False
    error: str | None = None


class SweepResult(BaseModel):
    out_dir: Path
    axis: str
    series_paths: list[Path]
    summary_path: Path
    points: list[SweepPoint]


class TuneResult(BaseModel):
    out_dir: Path
    best: TrialSummary
    trials: list[TrialSummary]
    summary_path: Path


def deployment_for_seed(config: ExperimentConfig, seed: int) -> DeploymentConfig:
    """Run seeds override ``deployment.seed`` so every seed gets its own snapshot"""
    return DeploymentConfig.model_validate({**config.deployment.model_dump(), "seed": seed})


def build_channels(config: ExperimentConfig, seed: int) -> tuple[DeploymentConfig, ChannelTensor, ClusterMap]:
    deployment_cfg = deployment_for_seed(config, seed)
    deployment = generate_deployment(deployment_cfg)
    channels = generate_cfr(deployment, config.fading, deployment_cfg)
    cluster = select_serving_aps(channels.gain, config.clustering.cluster_size)
    return deployment_cfg, channels, cluster


def build_instance(config: ExperimentConfig, seed: int) -> AllocationProblem:
    deployment_cfg, channels, cluster = build_channels(config, seed)
    return AllocationProblem(
        channels,
        cluster,
        config.weights,
        noise_power(deployment_cfg, config.fading),
        equal_power(deployment_cfg.max_power_w, deployment_cfg.pilot_length),
        config.clustering.normalization,
    )


def run_solver(solver: str, problem: AllocationProblem, config: ExperimentConfig, seed: int) -> tuple[Assignment, TrainTrace]:
    """Run one solver on one instance; the returned assignment is the best one found"""
    if solver == "ao":
        return ao_optimize(problem, config.ao, seed)

    env = AllocationEnv(problem, config.training.horizon)
    if solver == "rlm":
        agent, trace = ddpg_train(env, config.ddpg, config.training.episodes, seed, config.network)
    elif solver == "hym":
        agent, trace = hybrid_train(env, config.ddpg, config.hybrid.ao_config(), config.training.episodes, seed, config.network)
    else:
        raise ValueError(f"unknown solver {solver!r}; valid solvers are {', '.join(SOLVERS)}")
    return agent.best_assignment, trace


def _run_seed(config: ExperimentConfig, seed: int, solvers: tuple[str, ...]) -> SeedOutcome:
    outcome = SeedOutcome(seed=seed)
    try:
        problem = build_instance(config, seed)
    except Exception as e:
        logger.error("Seed %d: instance generation failed: %s", seed, e, exc_info=True)
        outcome.failures.extend(SolverFailure(solver=s, seed=seed, error=str(e)) for s in solvers)
        return outcome

    outcome.instance_hash = problem.instance_hash()
    for solver in solvers:
        started = time.perf_counter()
        try:
            _, trace = run_solver(solver, problem, config, seed)
        except Exception as e:
            logger.error("Seed %d: %s failed: %s", seed, solver, e, exc_info=True)
            outcome.failures.append(SolverFailure(solver=solver, seed=seed, error=str(e)))
            continue
        outcome.traces[solver] = trace
        outcome.wall_ms[solver] = (time.perf_counter() - started) * 1e3
        logger.info("Seed %d: %s final objective %.4f in %.0f ms", seed, solver, trace.final.best_objective, outcome.wall_ms[solver])
    return outcome


def _mean_std(values: list[float]) -> tuple[float | None, float | None]:
    if not values:
        return None, None
    array = np.asarray(values, dtype=np.float64)
    return float(array.mean()), float(array.std())


def _summarize(solver: str, outcomes: list[SeedOutcome], timing: bool) -> SolverSummary:
    finals = [o.traces[solver].final for o in outcomes if solver in o.traces and o.traces[solver].final]
    fields = {}
    for name, attr in (("objective", "best_objective"), ("total_se", "total_se"), ("gini", "gini"), ("lambda_min", "lambda_min")):
        values = [getattr(r, attr) for r in finals if getattr(r, attr) is not None]
        fields[f"final_{name}_mean"], fields[f"final_{name}_std"] = _mean_std(values)
    walls = [o.wall_ms[solver] for o in outcomes if solver in o.wall_ms]
    return SolverSummary(
        solver=solver,
        runs=len(finals),
        failures=sum(1 for o in outcomes for f in o.failures if f.solver == solver),
        mean_wall_ms=float(np.mean(walls)) if timing and walls else None,
        **fields,
    )


def _parallel(jobs, worker, max_workers: int | None):
    workers = max(1, min(max_workers or freqalloc_settings.MAX_WORKERS, len(jobs)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, jobs))


def _instance_comments(config: ExperimentConfig, outcomes: list[SeedOutcome]) -> list[str]:
    comments = [f"experiment_id={config.experiment_id}"]
    comments.extend(f"seed={o.seed} instance={o.instance_hash or 'unavailable'}" for o in outcomes)
    return comments


def run_compare(
    config: ExperimentConfig,
    out_dir: Path | None = None,
    timing: bool | None = None,
    max_workers: int | None = None,
) -> CompareResult:
    """
    Run AO, RLM and HYM on the same instance for every seed

    Seeds run as concurrent jobs and are merged in seed order after all
    finish. Writes ``<solver>.csv`` per solver and ``summary.csv``; a failing
    solver is recorded and the remaining runs continue.
    """
    out_dir = Path(out_dir or config.output_dir)
    timing = config.record_wall_time if timing is None else timing
    logger.info("Compare %s: seeds %s -> %s", config.experiment_id, config.seeds, out_dir)

    outcomes = _parallel(config.seeds, lambda seed: _run_seed(config, seed, SOLVERS), max_workers)
    comments = _instance_comments(config, outcomes)

    csv_paths = {}
    for solver in SOLVERS:
        rows = [
            row
            for o in outcomes
            if solver in o.traces
            for row in rows_from_trace(config.experiment_id, o.seed, o.traces[solver], timing)
        ]
        csv_paths[solver] = write_metrics_csv(out_dir / f"{solver}.csv", rows, comments)

    summaries = [_summarize(solver, outcomes, timing) for solver in SOLVERS]
    summary_path = write_table_csv(
        out_dir / "summary.csv",
        SUMMARY_HEADER,
        [[getattr(s, name) for name in SUMMARY_HEADER] for s in summaries],
        comments,
    )
    for s in summaries:
        walls = [o.wall_ms[s.solver] for o in outcomes if s.solver in o.wall_ms]
        if walls:
            logger.info("%s: mean final objective %.4f, mean wall time %.0f ms", s.solver, s.final_objective_mean or 0.0, np.mean(walls))

    failures = [f for o in outcomes for f in o.failures]
    return CompareResult(out_dir=out_dir, csv_paths=csv_paths, summary_path=summary_path, summaries=summaries, failures=failures)


def capacity_exceeded(config: ExperimentConfig) -> bool:
    """K > N * M * S: more UEs than ZF can separate even with perfect packing"""
    dep = config.deployment
    cluster = min(config.clustering.cluster_size, dep.num_aps)
    return dep.num_ues > dep.antennas_per_ap * cluster * dep.num_subbands


def sweep_config(config: ExperimentConfig, axis: str, value: int) -> ExperimentConfig:
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; valid axes are {', '.join(SWEEP_AXES)}")
    deployment = {**config.deployment.model_dump(), SWEEP_AXES[axis]: value}
    return ExperimentConfig.model_validate({**config.model_dump(), "deployment": deployment})


def run_sweep(
    config: ExperimentConfig,
    axis: str,
    values: list[int],
    out_dir: Path | None = None,
    timing: bool | None = None,
    max_workers: int | None = None,
) -> SweepResult:
    """
    Re-run the configured solver (HYM by default) for every sweep value and
    seed on freshly generated snapshots. Writes one metrics CSV per value and
    ``sweep_<axis>.csv`` with the final values per (value, seed).
    """
    if not values:
        raise ValueError("sweep needs at least one value")
    out_dir = Path(out_dir or config.output_dir)
    timing = config.record_wall_time if timing is None else timing
    configs = {value: sweep_config(config, axis, value) for value in values}
    for value, cfg in configs.items():
        if capacity_exceeded(cfg):
            logger.warning("Sweep %s=%d exceeds the N*M*S capacity heuristic; running anyway", axis, value)

    jobs = [(value, seed) for value in values for seed in config.seeds]
    outcomes = _parallel(jobs, lambda job: _run_seed(configs[job[0]], job[1], (config.solver,)), max_workers)

    series_paths, points = [], []
    for value in values:
        chunk = [o for (v, _), o in zip(jobs, outcomes, strict=True) if v == value]
        experiment_id = f"{config.experiment_id}-{axis}{value}"
        rows = [row for o in chunk if config.solver in o.traces for row in rows_from_trace(experiment_id, o.seed, o.traces[config.solver], timing)]
        comments = [f"{axis}={value}", *_instance_comments(configs[value], chunk)]
        series_paths.append(write_metrics_csv(out_dir / f"sweep_{axis}_{value}.csv", rows, comments))
        for o in chunk:
            final = o.traces[config.solver].final if config.solver in o.traces else None
            points.append(
                SweepPoint(
                    value=value,
                    seed=o.seed,
                    final_total_se=None if final is None else final.total_se,
                    final_objective=None if final is None else final.best_objective,
                    final_gini=None if final is None else final.gini,
                    capacity_flag=capacity_exceeded(configs[value]),
                    error="; ".join(f.error for f in o.failures) or None,
                )
            )

    header = ["value", "seed", "final_total_se", "final_objective", "final_gini", "capacity_flag", "error"]
    summary_path = write_table_csv(
        out_dir / f"sweep_{axis}.csv",
        header,
        [[getattr(p, name) for name in header] for p in points],
        [f"experiment_id={config.experiment_id}", f"solver={config.solver}"],
    )
    return SweepResult(out_dir=out_dir, axis=axis, series_paths=series_paths, summary_path=summary_path, points=points)


def run_tune(
    config: ExperimentConfig,
    out_dir: Path | None = None,
    trials: int | None = None,
    max_workers: int | None = None,
) -> TuneResult:
    """
    Random search over the DDPG hyperparameters on the first seed's instance

    Writes ``trials.csv``, one ``trial_<n>_loss.csv`` per trial and
    ``best_hyper.json``.
    """
    out_dir = Path(out_dir or config.output_dir)
    seed = config.seeds[0]
    trials = trials or config.tuning.trials
    problem = build_instance(config, seed)

    best_hyper, summaries = random_search(
        trials,
        TuningRanges(),
        config.tuning.episodes,
        seed,
        ddpg_trainer(lambda: AllocationEnv(problem, config.training.horizon), config.network),
        max_workers=max_workers,
    )
    best = next(s for s in summaries if s.hyper == best_hyper)

    hyper_fields = list(DdpgHyper.model_fields)
    summary_path = write_table_csv(
        out_dir / "trials.csv",
        ["trial", "seed", "final_reward", *hyper_fields],
        [[s.index + 1, s.seed, s.final_reward, *(getattr(s.hyper, f) for f in hyper_fields)] for s in summaries],
        [f"experiment_id={config.experiment_id}", f"instance={problem.instance_hash()}", f"best_trial={best.index + 1}"],
    )
    for s in summaries:
        if s.trace is not None:
            rows = rows_from_trace(f"{config.experiment_id}-trial{s.index + 1}", s.seed, s.trace)
            write_metrics_csv(out_dir / f"trial_{s.index + 1}_loss.csv", rows, [f"trial={s.index + 1}"])
    (out_dir / "best_hyper.json").write_text(json.dumps(best_hyper.model_dump(), indent=2) + "\n", encoding="utf-8")
    return TuneResult(out_dir=out_dir, best=best, trials=summaries, summary_path=summary_path)


def generate_channels(
    config: ExperimentConfig,
    seed: int,
    out_dir: Path | None = None,
    gains_csv: bool = False,
    ap: int | None = None,
    links: int = 10,
) -> dict[str, Path]:
    """
    Write the CFR1 tensor and cluster map for one seed, plus an optional
    per-link gain CSV (restricted to the ``links`` strongest UEs of ``ap``
    when an AP is given)
    """
    out_dir = Path(out_dir or config.output_dir)
    deployment_cfg, channels, cluster = build_channels(config, seed)
    paths = {
        "channels": save_channels(channels, out_dir / "channels.cfr"),
        "clusters": save_cluster_csv(cluster, out_dir / "clusters.csv"),
    }
    if gains_csv:
        selected = strongest_links(channels, ap, links) if ap is not None else None
        paths["gains"] = write_gain_csv(channels, out_dir / "gains.csv", subband_frequencies(deployment_cfg), selected)
    return paths
