from typing import NamedTuple, Protocol

import numpy as np

from ..clustering import antenna_mask
from ..objective.evaluate import ObjectiveReport
from ..objective.problem import AllocationProblem
from ..phy.assignment import Assignment
from .encoding import one_hot


class StepResult(NamedTuple):
    state: np.ndarray
    reward: float
    done: bool
    report: ObjectiveReport | None = None


class Environment(Protocol):
    """What the actor-critic trainers need from an environment"""

    num_ues: int
    num_subbands: int
    horizon: int

    @property
    def state_size(self) -> int: ...

    def reset(self) -> np.ndarray: ...

    def step(self, action: Assignment) -> StepResult: ...


def masked_gain_features(problem: AllocationProblem) -> np.ndarray:
    """
    z-scored log10 of ||h_{k,s} D_k||^2 for every (UE, subband), flattened K x S

    Links with zero masked power are floored at the smallest positive value.
    """
    channels, cluster = problem.channels, problem.cluster
    power = np.zeros((channels.num_ues, channels.num_subbands))
    for k in range(channels.num_ues):
        mask = antenna_mask(cluster, k, channels.antennas_per_ap)
        rows = channels.h[k].transpose(1, 0, 2).reshape(channels.num_subbands, -1)
        power[k] = np.sum(np.abs(rows[:, mask]) ** 2, axis=1)

    positive = power[power > 0]
    floor = positive.min() if positive.size else 1.0
    features = np.log10(np.maximum(power, floor))
    spread = features.std()
    features = (features - features.mean()) / (spread if spread > 0 else 1.0)
    return features.reshape(-1)


def env_step(state: np.ndarray, action: Assignment, context: "AllocationEnv") -> tuple[np.ndarray, float]:
    """
    Pure transition: the next state is the channel features followed by the
    one-hot of ``action``, the reward is the action's objective value.
    ``state`` only fixes the layout and is not otherwise read.
    """
    if np.shape(state) != (context.state_size,):
        raise ValueError(f"state has shape {np.shape(state)}, expected ({context.state_size},)")
    report = context.problem.evaluate(action)
    return context.observe(action), report.normalized_value


class AllocationEnv:
    """
    Episodic reallocation over one static channel snapshot

    Each episode starts from the round-robin assignment (UE k on subband
    k mod S) and lasts ``horizon`` steps.
    """

    def __init__(self, problem: AllocationProblem, horizon: int = 20):
        if horizon < 1:
            raise ValueError(f"horizon must be at least 1, got {horizon}")
        self.problem = problem
        self.num_ues = problem.num_ues
        self.num_subbands = problem.num_subbands
        self.horizon = horizon
        self.features = masked_gain_features(problem)
        self.features.flags.writeable = False
        self._current = Assignment.round_robin(self.num_ues, self.num_subbands)
        self._steps = 0

    @property
    def state_size(self) -> int:
        return 2 * self.num_ues * self.num_subbands

    @property
    def current(self) -> Assignment:
        return self._current

    def observe(self, assignment: Assignment) -> np.ndarray:
        return np.concatenate([self.features, one_hot(assignment)])

    def reset(self) -> np.ndarray:
        self._current = Assignment.round_robin(self.num_ues, self.num_subbands)
        self._steps = 0
        return self.observe(self._current)

    def step(self, action: Assignment) -> StepResult:
        report = self.problem.evaluate(action)
        self._current = action
        self._steps += 1
        return StepResult(self.observe(action), report.normalized_value, self._steps >= self.horizon, report)

    def reward(self, action: Assignment) -> float:
        return self.problem.score(action)
