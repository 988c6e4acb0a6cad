"""
Desk-scale acceptance checks

Slow (tens of minutes in total), so they only run with FREQALLOC_ACCEPTANCE=1:

    FREQALLOC_ACCEPTANCE=1 uv run pytest tests/test_acceptance.py -v -m acceptance
"""

import itertools
import os
from pathlib import Path

import numpy as np
import pytest

from freqalloc_cli.main import cli_dispatch
from freqalloc_core.experiments import ExperimentConfig, parse_config, read_csv_rows, run_compare, run_sweep
from freqalloc_core.experiments.runner import build_instance, run_solver
from freqalloc_core.optim import AllocationEnv, DdpgHyper, ddpg_train, hybrid_train
from freqalloc_core.phy import Assignment, evaluate_phy, interference_members

pytestmark = [
    pytest.mark.acceptance,
    pytest.mark.skipif(os.environ.get("FREQALLOC_ACCEPTANCE") != "1", reason="set FREQALLOC_ACCEPTANCE=1 to run acceptance checks"),
]

REPO_ROOT = Path(__file__).resolve().parents[1]
DESK = REPO_ROOT / "configs" / "desk.cfg"


@pytest.fixture(scope="module")
def desk() -> ExperimentConfig:
    return parse_config(DESK)


def _exhaustive_config(desk: ExperimentConfig) -> ExperimentConfig:
    data = desk.model_dump()
    data["deployment"].update(num_ues=4, num_subbands=4, num_aps=4, area_side_m=300)
    data["clustering"]["cluster_size"] = 2
    return ExperimentConfig.model_validate(data)


def test_zf_nulls_and_power_on_desk_instances(desk):
    rng = np.random.default_rng(0)
    for seed in range(100):
        problem = build_instance(desk, seed)
        channels, cluster = problem.channels, problem.cluster
        assignment = Assignment(subband_of=rng.integers(0, channels.num_subbands, size=channels.num_ues), num_subbands=channels.num_subbands)
        result = evaluate_phy(channels, cluster, assignment, problem.noise_power_w, problem.rho)
        for k in assignment.assigned():
            if k in result.zf_infeasible:
                continue
            s = assignment.subband_of[k]
            w = result.w[k]
            assert np.linalg.norm(w) ** 2 == pytest.approx(problem.rho, rel=1e-9)
            for i in interference_members(assignment, cluster, k)[1:]:
                h_i = channels.row(i, s)
                assert abs(h_i @ w) <= 1e-9 * np.linalg.norm(h_i) * np.linalg.norm(w)


@pytest.mark.parametrize(("solver", "required"), [("ao", 9), ("hym", 9), ("rlm", 7)])
def test_solvers_near_exhaustive_optimum(desk, solver, required):
    config = _exhaustive_config(desk)
    hits = 0
    for seed in range(10):
        problem = build_instance(config, seed)
        optimum = max(problem.score(Assignment(subband_of=list(a), num_subbands=4)) for a in itertools.product(range(4), repeat=4))
        _, trace = run_solver(solver, problem, config, seed)
        if trace.final.best_objective >= optimum - 0.05 * abs(optimum):
            hits += 1
    assert hits >= required


def test_hybrid_reduces_to_plain_training(desk):
    hyper = desk.ddpg.model_copy(update={"epsilon_start": 0.0, "epsilon_floor": 0.0})
    for seed in range(3):
        problem = build_instance(desk, seed)
        _, plain = ddpg_train(AllocationEnv(problem, desk.training.horizon), hyper, 5, seed, desk.network)
        _, hybrid = hybrid_train(AllocationEnv(problem, desk.training.horizon), hyper, desk.hybrid.ao_config(), 5, seed, desk.network)
        assert hybrid.comparable() == plain.comparable()


def test_solver_ordering(desk, tmp_path):
    result = run_compare(desk.with_seeds([0, 1, 2, 3, 4]), tmp_path)
    finals: dict[str, dict[str, tuple[float, float]]] = {}
    for solver, path in result.csv_paths.items():
        rows = read_csv_rows(path)
        finals[solver] = {}
        for seed in {r["seed"] for r in rows}:
            last = [r for r in rows if r["seed"] == seed][-1]
            finals[solver][seed] = (float(last["best_objective"]), float(last["gini"]))

    seeds = sorted(finals["hym"])
    assert sum(finals["hym"][s][0] >= finals["rlm"][s][0] for s in seeds) >= 4
    assert sum(finals["hym"][s][0] >= finals["ao"][s][0] for s in seeds) >= 4
    assert sum(finals["hym"][s][1] <= finals["rlm"][s][1] for s in seeds) >= 4


@pytest.mark.parametrize(("axis", "values", "direction"), [("ues", [8, 12, 16], -1), ("subbands", [8, 16, 24], 1)])
def test_scaling_trends(desk, tmp_path, axis, values, direction):
    result = run_sweep(desk.with_seeds([0, 1, 2, 3, 4]), axis, values, tmp_path)
    holds = 0
    for seed in range(5):
        series = [p.final_total_se for p in result.points if p.seed == seed]
        if all(direction * (b - a) >= 0 for a, b in zip(series, series[1:], strict=False)):
            holds += 1
    assert holds >= 4


def test_cli_outputs_are_byte_identical(tmp_path):
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert cli_dispatch(["compare", "--config", str(DESK), "--seed", "3", "--out", str(out)]) == 0
        files = [str(out / f"{s}.csv") for s in ("ao", "rlm", "hym")]
        assert cli_dispatch(["plot", *files, "--out", str(out / "plot.svg")]) == 0
        outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
    assert outputs[0] == outputs[1]


def test_tuned_configuration_stays_trainable(desk):
    problem = build_instance(desk, 0)
    agent, trace = ddpg_train(AllocationEnv(problem, 10), DdpgHyper.tuned_full_scale(), 3, 0, desk.network)
    assert np.isfinite(agent.best_reward)
    assert len(trace) == 30
