import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import freqalloc_settings
from ..utils.seeding import child_rng, child_seed
from .ddpg import SEARCH_RANGES, DdpgHyper, NetworkConfig, ddpg_train
from .env import Environment
from .trace import TrainTrace

logger = logging.getLogger(__name__)

LOG_UNIFORM = ("actor_lr", "critic_lr", "buffer_capacity")
INTEGER = ("buffer_capacity", "batch_size")

# trainer(hyper, episodes, seed) -> (final cumulative episode reward, trace or None)
Trainer = Callable[[DdpgHyper, int, int], tuple[float, TrainTrace | None]]


class TuningRanges(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    actor_lr: tuple[float, float] = SEARCH_RANGES["actor_lr"]
    critic_lr: tuple[float, float] = SEARCH_RANGES["critic_lr"]
    gamma: tuple[float, float] = SEARCH_RANGES["gamma"]
    buffer_capacity: tuple[int, int] = SEARCH_RANGES["buffer_capacity"]
    batch_size: tuple[int, int] = SEARCH_RANGES["batch_size"]
    tau: tuple[float, float] = SEARCH_RANGES["tau"]
    noise: tuple[float, float] = SEARCH_RANGES["noise"]

    @model_validator(mode="after")
    def _ordered(self) -> "TuningRanges":
        for name in SEARCH_RANGES:
            low, high = getattr(self, name)
            if low > high or (name in LOG_UNIFORM and low <= 0):
                raise ValueError(f"invalid range for {name}: [{low}, {high}]")
        return self


class TrialSummary(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    index: int
    seed: int
    hyper: DdpgHyper
    final_reward: float
    trace: TrainTrace | None = Field(None, exclude=True)


def sample_hyper(rng: np.random.Generator, ranges: TuningRanges, base: DdpgHyper | None = None) -> DdpgHyper:
    """Learning rates and buffer size log-uniform, everything else uniform"""
    values = {}
    for name in SEARCH_RANGES:
        low, high = getattr(ranges, name)
        if name in LOG_UNIFORM:
            value = math.exp(rng.uniform(math.log(low), math.log(high)))
        else:
            value = rng.uniform(low, high)
        if name in INTEGER:
            value = int(min(max(round(value), low), high))
        values[name] = value
    base = base or DdpgHyper()
    return base.model_copy(update=values)


def ddpg_trainer(env_factory: Callable[[], Environment], network: NetworkConfig | None = None) -> Trainer:
    """Trainer scoring a configuration by its last episode's cumulative reward"""

    def train(hyper: DdpgHyper, episodes: int, seed: int) -> tuple[float, TrainTrace]:
        agent, trace = ddpg_train(env_factory(), hyper, episodes, seed, network)
        return agent.episode_rewards[-1], trace

    return train


def random_search(
    trial_count: int,
    ranges: TuningRanges,
    train_budget: int,
    seed: int,
    trainer: Trainer,
    max_workers: int | None = None,
) -> tuple[DdpgHyper, list[TrialSummary]]:
    """
    Sample ``trial_count`` configurations, train each for ``train_budget``
    episodes and keep the one with the highest final reward (earliest on ties).
    Trials run on a thread pool; samples and seeds are drawn up front.
    """
    if trial_count < 1:
        raise ValueError(f"trial_count must be at least 1, got {trial_count}")
    sampler = child_rng(seed, "tune.sample")
    configs = [sample_hyper(sampler, ranges) for _ in range(trial_count)]
    seeds = [child_seed(seed, "tune.trial", i) for i in range(trial_count)]

    workers = max_workers or freqalloc_settings.MAX_WORKERS
    with ThreadPoolExecutor(max_workers=max(1, min(workers, trial_count))) as pool:
        outcomes = list(pool.map(lambda i: trainer(configs[i], train_budget, seeds[i]), range(trial_count)))

    summaries = []
    for i, (reward, trace) in enumerate(outcomes):
        summaries.append(TrialSummary(index=i, seed=seeds[i], hyper=configs[i], final_reward=float(reward), trace=trace))
        logger.info("Trial %d: final reward %.4f (actor_lr=%.2e gamma=%.3f batch=%d)", i + 1, reward, configs[i].actor_lr, configs[i].gamma, configs[i].batch_size)

    best = summaries[0]
    for summary in summaries[1:]:
        if summary.final_reward > best.final_reward:
            best = summary
    logger.info("Best trial: %d with final reward %.4f", best.index + 1, best.final_reward)
    return best.hyper, summaries
