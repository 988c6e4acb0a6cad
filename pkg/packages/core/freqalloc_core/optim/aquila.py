"""
Aquila Optimizer (maximization)

Four moves chosen per individual: expanded exploration (high soar),
narrowed exploration (contour flight with a Levy step and a spiral),
expanded exploitation (low flight) and narrowed exploitation (walk and
grab). The first two are used during the first two thirds of the run.
"""

import logging
import math
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.special import gamma

from ..objective.problem import AllocationProblem
from ..phy.assignment import Assignment
from ..utils.seeding import seed_sequence
from .encoding import decode, encode
from .trace import TraceRecord, TrainTrace

logger = logging.getLogger(__name__)

SPIRAL_U = 0.00565
SPIRAL_OMEGA = 0.005
SPIRAL_THETA1 = 3.0 * math.pi / 2.0
QF_GUARD = 1e-10


class AoConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    population: int = Field(20, ge=2, description="Population size P")
    iterations: int = Field(200, ge=1, description="Generations T")
    beta: float = Field(1.5, gt=0, le=2, description="Levy exponent")
    alpha: float = Field(0.1, ge=0)
    delta: float = Field(0.1, ge=0)
    max_workers: int = Field(1, ge=1, description="Threads used to score a generation")


class AoResult(NamedTuple):
    best_x: np.ndarray
    best_value: float
    history: list[float]


def levy_flight(rng: np.random.Generator, size: int, beta: float) -> np.ndarray:
    """Mantegna's Levy step scaled by 0.01"""
    sigma = (
        gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0) / (gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0))
    ) ** (1.0 / beta)
    u = rng.standard_normal(size) * sigma
    v = rng.standard_normal(size)
    return 0.01 * u / np.abs(v) ** (1.0 / beta)


def _spiral(rng: np.random.Generator, dim: int) -> tuple[np.ndarray, np.ndarray]:
    d1 = np.arange(1, dim + 1)
    radius = rng.uniform(1.0, 20.0) + SPIRAL_U * d1
    theta = -SPIRAL_OMEGA * d1 + SPIRAL_THETA1
    return radius * np.sin(theta), radius * np.cos(theta)


def _candidate(
    rng: np.random.Generator,
    t: int,
    cfg: AoConfig,
    current: np.ndarray,
    best: np.ndarray,
    mean: np.ndarray,
    population: np.ndarray,
    lower: np.ndarray,
    upper: np.ndarray,
) -> np.ndarray:
    total = cfg.iterations
    dim = best.size
    if t <= (2.0 / 3.0) * total:
        if rng.random() < 0.5:
            return best * (1.0 - t / total) + (mean - best * rng.random())
        levy = levy_flight(rng, dim, cfg.beta)
        partner = population[rng.integers(population.shape[0])]
        x, y = _spiral(rng, dim)
        return best * levy + partner + (y - x) * rng.random()

    if rng.random() < 0.5:
        return (best - mean) * cfg.alpha - rng.random() + ((upper - lower) * rng.random() + lower) * cfg.delta
    quality = t ** ((2.0 * rng.random() - 1.0) / ((1.0 - total) ** 2 + QF_GUARD))
    g1 = 2.0 * rng.random() - 1.0
    g2 = 2.0 * (1.0 - t / total)
    levy = levy_flight(rng, dim, cfg.beta)
    return quality * best - g1 * current * rng.random() - g2 * levy + rng.random() * g1


def aquila_search(
    objective: Callable[[np.ndarray], float],
    lower,
    upper,
    cfg: AoConfig,
    seed: int,
    initial: np.ndarray | None = None,
    on_generation: Callable[[int, np.ndarray, float, float], None] | None = None,
) -> AoResult:
    """
    Maximize ``objective`` over the box [lower, upper]

    Every individual owns a spawned RNG stream and a generation is scored as
    a batch after all candidates are drawn, so results do not depend on
    ``max_workers``. Rows of ``initial`` replace the first random
    individuals. ``on_generation(t, best_x, best_value, generation_best)``
    runs after each generation.
    """
    lower = np.asarray(lower, dtype=np.float64)
    upper = np.asarray(upper, dtype=np.float64)
    if lower.shape != upper.shape or np.any(upper < lower):
        raise ValueError("bounds must have equal shapes with lower <= upper")
    dim = lower.size
    size = cfg.population

    rngs = [np.random.default_rng(s) for s in seed_sequence(seed, "aquila").spawn(size)]
    population = np.stack([rng.uniform(lower, upper) for rng in rngs])
    if initial is not None:
        initial = np.atleast_2d(np.asarray(initial, dtype=np.float64))[:size]
        population[: initial.shape[0]] = np.clip(initial, lower, upper)

    executor = ThreadPoolExecutor(max_workers=cfg.max_workers) if cfg.max_workers > 1 else None

    def score(rows: np.ndarray) -> np.ndarray:
        if executor is None:
            return np.array([objective(row) for row in rows], dtype=np.float64)
        return np.fromiter(executor.map(objective, rows), dtype=np.float64, count=rows.shape[0])

    try:
        fitness = score(population)
        leader = int(np.argmax(fitness))
        best_x, best_value = population[leader].copy(), float(fitness[leader])
        history = []

        for t in range(1, cfg.iterations + 1):
            mean = population.mean(axis=0)
            candidates = np.stack(
                [
                    np.clip(_candidate(rngs[i], t, cfg, population[i], best_x, mean, population, lower, upper), lower, upper)
                    for i in range(size)
                ]
            )
            values = score(candidates)
            improved = values > fitness
            population[improved] = candidates[improved]
            fitness[improved] = values[improved]

            leader = int(np.argmax(fitness))
            if fitness[leader] > best_value:
                best_x, best_value = population[leader].copy(), float(fitness[leader])
            history.append(best_value)
            if on_generation is not None:
                on_generation(t, best_x, best_value, float(values.max()))
    finally:
        if executor is not None:
            executor.shutdown()

    return AoResult(best_x, best_value, history)


def ao_optimize(
    problem: AllocationProblem,
    cfg: AoConfig,
    seed: int,
    initial: list[Assignment] | None = None,
) -> tuple[Assignment, TrainTrace]:
    """Run AO on the relaxed assignment vector and decode the winner"""
    num_subbands = problem.num_subbands
    trace = TrainTrace(solver="ao")
    started = time.perf_counter()

    def objective(x: np.ndarray) -> float:
        return problem.score(decode(x, num_subbands))

    def record(t: int, best_x: np.ndarray, best_value: float, generation_best: float) -> None:
        report = problem.evaluate(decode(best_x, num_subbands))
        trace.append(
            TraceRecord(
                iteration=t,
                best_objective=best_value,
                objective=generation_best,
                total_se=report.total_se,
                gini=report.gini,
                lambda_min=report.lambda_min,
                c_violations=report.violations.count,
                wall_ms=(time.perf_counter() - started) * 1e3,
            )
        )

    logger.info("AO start: K=%d S=%d P=%d T=%d seed=%d", problem.num_ues, num_subbands, cfg.population, cfg.iterations, seed)
    seeds = np.stack([encode(a) for a in initial]) if initial else None
    result = aquila_search(
        objective,
        np.zeros(problem.num_ues),
        np.full(problem.num_ues, float(num_subbands)),
        cfg,
        seed,
        initial=seeds,
        on_generation=record,
    )
    best = decode(result.best_x, num_subbands)
    logger.info("AO finished: best objective %.4f after %d evaluations", result.best_value, problem.evaluations)
    return best, trace
