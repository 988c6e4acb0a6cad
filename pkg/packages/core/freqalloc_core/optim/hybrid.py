import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..phy.assignment import Assignment
from ..utils.seeding import child_seed
from .aquila import AoConfig, aquila_search
from .ddpg import AgentBundle, DdpgHyper, NetworkConfig, train_agent
from .encoding import decode, encode
from .env import AllocationEnv
from .trace import TrainTrace

logger = logging.getLogger(__name__)


class HybridConfig(BaseModel):
    """Budget of the short AO run that replaces random exploration"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    inner_population: int = Field(10, ge=2)
    inner_iterations: int = Field(5, ge=1)

    def ao_config(self) -> AoConfig:
        return AoConfig(population=self.inner_population, iterations=self.inner_iterations)


class AoExplorer:
    """
    Exploration step of the hybrid solver

    Runs AO on the one-step reward with the actor's proposal as the first
    individual, so the returned action never scores below the proposal.
    """

    def __init__(self, env: AllocationEnv, ao_inner: AoConfig, seed: int):
        self.env = env
        self.ao_inner = ao_inner
        self.seed = seed
        self.calls = 0

    def __call__(self, state: np.ndarray, proposal: Assignment, step: int) -> Assignment:
        num_subbands = self.env.num_subbands
        self.calls += 1
        result = aquila_search(
            lambda x: self.env.reward(decode(x, num_subbands)),
            np.zeros(self.env.num_ues),
            np.full(self.env.num_ues, float(num_subbands)),
            self.ao_inner,
            child_seed(self.seed, "hybrid.explore", step),
            initial=encode(proposal),
        )
        return decode(result.best_x, num_subbands)


def hybrid_train(
    env: AllocationEnv,
    hyper: DdpgHyper,
    ao_inner: AoConfig,
    episodes: int,
    seed: int,
    network: NetworkConfig | None = None,
) -> tuple[AgentBundle, TrainTrace]:
    """Actor-critic training whose exploratory actions come from short AO runs"""
    explorer = AoExplorer(env, ao_inner, seed)
    agent, trace = train_agent(env, hyper, episodes, seed, network, explorer=explorer, solver="hym")
    logger.debug("HYM used %d inner AO runs", explorer.calls)
    return agent, trace
