import logging
from typing import NamedTuple

import numpy as np

from ..errors import BufferNotReadyError

logger = logging.getLogger(__name__)


class Transition(NamedTuple):
    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray


class Batch(NamedTuple):
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray


class ReplayBuffer:
    """Fixed-capacity FIFO of transitions with uniform sampling (with replacement)"""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"replay capacity must be at least 1, got {capacity}")
        self.capacity = int(capacity)
        self._items: list[Transition] = []
        self._cursor = 0

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        # oldest first
        if len(self._items) < self.capacity:
            return iter(list(self._items))
        return iter(self._items[self._cursor :] + self._items[: self._cursor])

    def push(self, transition: Transition) -> None:
        if len(self._items) < self.capacity:
            self._items.append(transition)
        else:
            self._items[self._cursor] = transition
        self._cursor = (self._cursor + 1) % self.capacity

    def ready(self, batch_size: int) -> bool:
        return len(self._items) >= batch_size

    def sample(self, batch_size: int, rng: np.random.Generator) -> list[Transition]:
        if not self.ready(batch_size):
            raise BufferNotReadyError(f"buffer holds {len(self._items)} transitions, batch needs {batch_size}")
        picks = rng.integers(0, len(self._items), size=batch_size)
        return [self._items[i] for i in picks]


def stack_batch(transitions: list[Transition]) -> Batch:
    return Batch(
        states=np.stack([t.state for t in transitions]),
        actions=np.stack([t.action for t in transitions]),
        rewards=np.array([t.reward for t in transitions], dtype=np.float64),
        next_states=np.stack([t.next_state for t in transitions]),
    )


def buffer_push(buffer: ReplayBuffer, transition: Transition) -> None:
    buffer.push(transition)


def buffer_sample(buffer: ReplayBuffer, batch_size: int, rng: np.random.Generator) -> list[Transition]:
    return buffer.sample(batch_size, rng)
