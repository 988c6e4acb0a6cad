from __future__ import annotations

import json
import logging
import math
import time
from collections.abc import Callable
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..neural.adam import AdamState, adam_step
from ..neural.mlp import Mlp, OutputActivation, soft_update, softmax_groups
from ..neural.replay import ReplayBuffer, Transition, stack_batch
from ..neural.storage import load_mlp, save_mlp
from ..phy.assignment import Assignment
from ..utils.seeding import child_rng
from .encoding import from_scores, one_hot
from .env import Environment
from .trace import TraceRecord, TrainTrace

logger = logging.getLogger(__name__)

# (low, high) bounds sampled by the random search
SEARCH_RANGES = {
    "actor_lr": (1e-5, 1e-3),
    "critic_lr": (1e-5, 1e-3),
    "gamma": (0.9, 0.99),
    "buffer_capacity": (10_000, 1_000_000),
    "batch_size": (32, 256),
    "tau": (0.001, 0.01),
    "noise": (0.1, 0.5),
}

Explorer = Callable[[np.ndarray, Assignment, int], Assignment]


class DdpgHyper(BaseModel):
    """
    Actor-critic training hyperparameters

    Only sanity bounds are enforced here; the narrower search box is
    ``SEARCH_RANGES`` and is checked with ``within_search_ranges``.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    actor_lr: float = Field(1e-3, gt=0)
    critic_lr: float = Field(1e-3, gt=0)
    gamma: float = Field(0.95, ge=0, le=1)
    buffer_capacity: int = Field(100_000, ge=1)
    batch_size: int = Field(64, ge=1)
    tau: float = Field(0.005, ge=0, le=1)
    noise: float = Field(0.2, ge=0, description="Half-width of the uniform logit perturbation")
    epsilon_start: float = Field(1.0, ge=0, le=1)
    epsilon_decay: float = Field(0.995, gt=0, le=1, description="Multiplied into epsilon after every step")
    epsilon_floor: float = Field(0.05, ge=0, le=1)

    @model_validator(mode="after")
    def _floor_below_start(self) -> DdpgHyper:
        if self.epsilon_floor > self.epsilon_start:
            raise ValueError(f"epsilon_floor {self.epsilon_floor} exceeds epsilon_start {self.epsilon_start}")
        return self

    def within_search_ranges(self) -> list[str]:
        """Names of fields outside the random-search box (empty when inside)"""
        return [name for name, (low, high) in SEARCH_RANGES.items() if not low <= getattr(self, name) <= high]

    @classmethod
    def tuned_full_scale(cls) -> DdpgHyper:
        """Hand-tuned full-scale settings; several lie outside SEARCH_RANGES"""
        return cls(actor_lr=0.00226, critic_lr=0.00226, gamma=0.882, batch_size=272, buffer_capacity=30_397)


class NetworkConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    hidden_sizes: tuple[int, int] = Field((64, 32), description="Widths of the two ReLU hidden layers")

    @model_validator(mode="after")
    def _positive(self) -> NetworkConfig:
        if min(self.hidden_sizes) < 1:
            raise ValueError(f"hidden sizes must be positive, got {self.hidden_sizes}")
        return self


class AgentBundle:
    """Trained actor/critic pair with their targets, replay buffer and settings"""

    def __init__(
        self,
        actor: Mlp,
        critic: Mlp,
        target_actor: Mlp,
        target_critic: Mlp,
        buffer: ReplayBuffer,
        hyper: DdpgHyper,
        network: NetworkConfig,
        num_subbands: int,
    ):
        self.actor = actor
        self.critic = critic
        self.target_actor = target_actor
        self.target_critic = target_critic
        self.buffer = buffer
        self.hyper = hyper
        self.network = network
        self.num_subbands = num_subbands
        self.best_assignment: Assignment | None = None
        self.best_reward = -math.inf
        self.episode_rewards: list[float] = []

    @classmethod
    def build(cls, state_size: int, num_ues: int, num_subbands: int, hyper: DdpgHyper, network: NetworkConfig, rng) -> AgentBundle:
        action_size = num_ues * num_subbands
        actor = Mlp([state_size, *network.hidden_sizes, action_size], OutputActivation.SOFTMAX, group_size=num_subbands, rng=rng)
        critic = Mlp([state_size + action_size, *network.hidden_sizes, 1], rng=rng)
        return cls(actor, critic, actor.copy(), critic.copy(), ReplayBuffer(hyper.buffer_capacity), hyper, network, num_subbands)

    def act(self, state: np.ndarray) -> Assignment:
        """Greedy action: per-UE argmax of the actor's softmax"""
        return from_scores(self.actor.predict(state), self.num_subbands)

    def save(self, directory: Path) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        header = {
            "hyper": self.hyper.model_dump(),
            "network": self.network.model_dump(),
            "num_subbands": self.num_subbands,
            "best_reward": None if math.isinf(self.best_reward) else self.best_reward,
            "best_assignment": None if self.best_assignment is None else list(self.best_assignment.subband_of),
        }
        (directory / "hyper.json").write_text(json.dumps(header, indent=2), encoding="utf-8")
        save_mlp(self.actor, directory / "actor.mlp")
        save_mlp(self.critic, directory / "critic.mlp")
        save_mlp(self.target_actor, directory / "actor_target.mlp")
        save_mlp(self.target_critic, directory / "critic_target.mlp")
        return directory

    @classmethod
    def load(cls, directory: Path) -> AgentBundle:
        directory = Path(directory)
        header = json.loads((directory / "hyper.json").read_text(encoding="utf-8"))
        hyper = DdpgHyper(**header["hyper"])
        bundle = cls(
            load_mlp(directory / "actor.mlp"),
            load_mlp(directory / "critic.mlp"),
            load_mlp(directory / "actor_target.mlp"),
            load_mlp(directory / "critic_target.mlp"),
            ReplayBuffer(hyper.buffer_capacity),
            hyper,
            NetworkConfig(**header["network"]),
            header["num_subbands"],
        )
        if header["best_reward"] is not None:
            bundle.best_reward = header["best_reward"]
        if header["best_assignment"] is not None:
            bundle.best_assignment = Assignment(subband_of=header["best_assignment"], num_subbands=bundle.num_subbands)
        return bundle


def td_target(reward, gamma: float, next_q):
    """y = r + gamma * Q'(s', mu'(s'))"""
    return np.asarray(reward, dtype=np.float64) + gamma * np.asarray(next_q, dtype=np.float64)


def noisy_sample(rng: np.random.Generator, logits: np.ndarray, num_subbands: int, noise: float) -> Assignment:
    """Perturb logits with U(-noise, noise), then draw one subband per UE from the softmax"""
    noisy = logits + rng.uniform(-noise, noise, size=logits.shape)
    probs = softmax_groups(noisy[None, :], num_subbands).reshape(-1, num_subbands)
    draws = rng.random(probs.shape[0])
    picks = np.minimum((np.cumsum(probs, axis=1) < draws[:, None]).sum(axis=1), num_subbands - 1)
    return Assignment(subband_of=picks.tolist(), num_subbands=num_subbands)


def _update(agent: AgentBundle, rng: np.random.Generator, adam: tuple[AdamState, AdamState]) -> tuple[float, float]:
    hyper = agent.hyper
    batch = stack_batch(agent.buffer.sample(hyper.batch_size, rng))
    size = batch.rewards.size
    state_size = batch.states.shape[1]

    next_actions = agent.target_actor.predict(batch.next_states)
    next_q = agent.target_critic.predict(np.hstack([batch.next_states, next_actions]))[:, 0]
    target = td_target(batch.rewards, hyper.gamma, next_q)

    q, cache = agent.critic.forward(np.hstack([batch.states, batch.actions]))
    error = q[:, 0] - target
    critic_loss = float(np.mean(error**2))
    grads = agent.critic.backward(cache, (2.0 * error / size)[:, None])
    adam_step(agent.critic.parameters(), grads.as_list(), adam[1], hyper.critic_lr)
    agent.critic.mark_updated()

    # deterministic policy gradient through the freshly updated critic
    policy, actor_cache = agent.actor.forward(batch.states)
    q_policy, q_cache = agent.critic.forward(np.hstack([batch.states, policy]))
    actor_loss = -float(np.mean(q_policy))
    dq_da = agent.critic.backward(q_cache, np.full((size, 1), -1.0 / size)).inputs[:, state_size:]
    actor_grads = agent.actor.backward(actor_cache, dq_da)
    adam_step(agent.actor.parameters(), actor_grads.as_list(), adam[0], hyper.actor_lr)
    agent.actor.mark_updated()

    soft_update(agent.target_actor, agent.actor, hyper.tau)
    soft_update(agent.target_critic, agent.critic, hyper.tau)
    return actor_loss, critic_loss


def train_agent(
    env: Environment,
    hyper: DdpgHyper,
    episodes: int,
    seed: int,
    network: NetworkConfig | None = None,
    explorer: Explorer | None = None,
    solver: str = "rlm",
) -> tuple[AgentBundle, TrainTrace]:
    """
    Shared actor-critic loop

    With probability epsilon a step explores: through ``explorer`` when one
    is given, otherwise by sampling from noise-perturbed actor logits. The
    replay buffer stores the one-hot of the executed assignment. Updates
    start once the buffer holds a full batch.
    """
    if episodes < 1:
        raise ValueError(f"episodes must be at least 1, got {episodes}")
    network = network or NetworkConfig()
    rng = child_rng(seed, "agent")
    agent = AgentBundle.build(env.state_size, env.num_ues, env.num_subbands, hyper, network, child_rng(seed, "agent.init"))
    adam = (AdamState(agent.actor.parameters()), AdamState(agent.critic.parameters()))
    trace = TrainTrace(solver=solver)
    best_report = None
    epsilon = hyper.epsilon_start
    step = 0
    started = time.perf_counter()

    logger.info("%s training start: %d episodes x %d steps, seed=%d", solver.upper(), episodes, env.horizon, seed)
    for _ in range(episodes):
        state = env.reset()
        episode_reward = 0.0
        for _ in range(env.horizon):
            step += 1
            probs, cache = agent.actor.forward(state)
            proposal = from_scores(probs, env.num_subbands)
            explored = bool(rng.random() < epsilon)
            if not explored:
                action = proposal
            elif explorer is not None:
                action = explorer(state, proposal, step)
            else:
                action = noisy_sample(rng, cache.pre_activations[-1][0], env.num_subbands, hyper.noise)

            result = env.step(action)
            agent.buffer.push(Transition(state, one_hot(action), result.reward, result.state))
            episode_reward += result.reward

            losses = _update(agent, rng, adam) if agent.buffer.ready(hyper.batch_size) else (None, None)

            if result.reward > agent.best_reward:
                agent.best_reward = result.reward
                agent.best_assignment = action
                best_report = result.report

            trace.append(
                TraceRecord(
                    iteration=step,
                    best_objective=agent.best_reward,
                    objective=result.reward,
                    total_se=None if best_report is None else best_report.total_se,
                    gini=None if best_report is None else best_report.gini,
                    lambda_min=None if best_report is None else best_report.lambda_min,
                    c_violations=None if best_report is None else best_report.violations.count,
                    actor_loss=losses[0],
                    critic_loss=losses[1],
                    epsilon=epsilon,
                    explored=explored,
                    deviated=action != proposal,
                    updated=losses[0] is not None,
                    wall_ms=(time.perf_counter() - started) * 1e3,
                )
            )
            epsilon = max(hyper.epsilon_floor, epsilon * hyper.epsilon_decay)
            state = result.state
            if result.done:
                break
        agent.episode_rewards.append(episode_reward)

    logger.info("%s training finished: best objective %.4f, last episode reward %.4f", solver.upper(), agent.best_reward, agent.episode_rewards[-1])
    return agent, trace


def ddpg_train(
    env: Environment,
    hyper: DdpgHyper,
    episodes: int,
    seed: int,
    network: NetworkConfig | None = None,
) -> tuple[AgentBundle, TrainTrace]:
    return train_agent(env, hyper, episodes, seed, network, explorer=None, solver="rlm")
