from __future__ import annotations

from collections.abc import Sequence
from enum import Enum
from typing import NamedTuple

import numpy as np

from ..errors import ShapeMismatchError, StaleCacheError


class OutputActivation(str, Enum):
    IDENTITY = "identity"
    SOFTMAX = "softmax"


class ForwardCache(NamedTuple):
    """Activations remembered by ``Mlp.forward`` for the matching ``backward``"""

    version: int
    inputs: list[np.ndarray]
    pre_activations: list[np.ndarray]
    output: np.ndarray
    squeeze: bool


class Gradients(NamedTuple):
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    inputs: np.ndarray

    def as_list(self) -> list[np.ndarray]:
        """Interleaved [dW0, db0, dW1, db1, ...], matching ``Mlp.parameters()``"""
        return [g for pair in zip(self.weights, self.biases, strict=True) for g in pair]


def softmax_groups(z: np.ndarray, group_size: int) -> np.ndarray:
    batch = z.shape[0]
    grouped = z.reshape(batch, -1, group_size)
    shifted = np.exp(grouped - grouped.max(axis=-1, keepdims=True))
    return (shifted / shifted.sum(axis=-1, keepdims=True)).reshape(batch, -1)


class Mlp:
    """
    Fully connected network: affine + ReLU for every hidden layer, then a
    final affine layer followed by identity or a softmax over consecutive
    groups of ``group_size`` outputs.

    Inputs are batch-first. ``version`` changes whenever parameters are
    mutated through this class, which lets ``backward`` reject caches from
    an older forward pass.
    """

    def __init__(
        self,
        sizes: Sequence[int],
        output: OutputActivation = OutputActivation.IDENTITY,
        group_size: int | None = None,
        rng: np.random.Generator | None = None,
    ):
        sizes = [int(n) for n in sizes]
        if len(sizes) < 2 or min(sizes) < 1:
            raise ShapeMismatchError(f"layer sizes must list at least input and output widths >= 1, got {sizes}")
        output = OutputActivation(output)
        if output is OutputActivation.SOFTMAX:
            group_size = group_size or sizes[-1]
            if sizes[-1] % group_size:
                raise ShapeMismatchError(f"output width {sizes[-1]} is not a multiple of softmax group {group_size}")
        self.sizes = sizes
        self.output = output
        self.group_size = group_size if output is OutputActivation.SOFTMAX else None
        self.version = 0

        rng = rng if rng is not None else np.random.default_rng(0)
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        for fan_in, fan_out in zip(sizes[:-1], sizes[1:], strict=True):
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            self.weights.append(rng.uniform(-bound, bound, size=(fan_out, fan_in)))
            self.biases.append(np.zeros(fan_out))

    @classmethod
    def from_parameters(
        cls,
        weights: Sequence[np.ndarray],
        biases: Sequence[np.ndarray],
        output: OutputActivation = OutputActivation.IDENTITY,
        group_size: int | None = None,
    ) -> Mlp:
        if len(weights) != len(biases) or not weights:
            raise ShapeMismatchError("need one bias vector per weight matrix")
        sizes = [int(np.shape(weights[0])[1])] + [int(np.shape(w)[0]) for w in weights]
        net = cls(sizes, output, group_size)
        for i, (w, b) in enumerate(zip(weights, biases, strict=True)):
            w = np.array(w, dtype=np.float64)
            b = np.array(b, dtype=np.float64).reshape(-1)
            if w.shape != net.weights[i].shape or b.shape != net.biases[i].shape:
                raise ShapeMismatchError(f"layer {i}: got W{w.shape} b{b.shape}, expected W{net.weights[i].shape}")
            net.weights[i] = w
            net.biases[i] = b
        return net

    @property
    def input_size(self) -> int:
        return self.sizes[0]

    @property
    def output_size(self) -> int:
        return self.sizes[-1]

    def parameters(self) -> list[np.ndarray]:
        """Interleaved [W0, b0, W1, b1, ...]; arrays are the live parameters"""
        return [p for pair in zip(self.weights, self.biases, strict=True) for p in pair]

    def mark_updated(self) -> None:
        self.version += 1

    def copy(self) -> Mlp:
        return Mlp.from_parameters(self.weights, self.biases, self.output, self.group_size)

    def forward(self, x: np.ndarray) -> tuple[np.ndarray, ForwardCache]:
        x = np.asarray(x, dtype=np.float64)
        squeeze = x.ndim == 1
        a = x[None, :] if squeeze else x
        if a.ndim != 2 or a.shape[1] != self.input_size:
            raise ShapeMismatchError(f"expected input width {self.input_size}, got shape {x.shape}")

        inputs, pre = [], []
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases, strict=True)):
            inputs.append(a)
            z = a @ w.T + b
            pre.append(z)
            a = np.maximum(z, 0.0) if i < last else z

        if self.output is OutputActivation.SOFTMAX:
            a = softmax_groups(a, self.group_size)

        y = a[0] if squeeze else a
        return y, ForwardCache(self.version, inputs, pre, a, squeeze)

    def predict(self, x: np.ndarray) -> np.ndarray:
        return self.forward(x)[0]

    def backward(self, cache: ForwardCache, grad_output: np.ndarray) -> Gradients:
        """Reverse-mode gradients of a scalar loss given dLoss/dOutput"""
        if cache.version != self.version:
            raise StaleCacheError(f"cache is from parameter version {cache.version}, network is at {self.version}")
        dy = np.asarray(grad_output, dtype=np.float64)
        dy = dy[None, :] if cache.squeeze else dy
        if dy.shape != cache.output.shape:
            raise StaleCacheError(f"output gradient shape {dy.shape} does not match cached output {cache.output.shape}")

        if self.output is OutputActivation.SOFTMAX:
            batch = dy.shape[0]
            y = cache.output.reshape(batch, -1, self.group_size)
            g = dy.reshape(batch, -1, self.group_size)
            dz = (y * (g - np.sum(g * y, axis=-1, keepdims=True))).reshape(batch, -1)
        else:
            dz = dy

        grad_w: list[np.ndarray] = [np.empty(0)] * len(self.weights)
        grad_b: list[np.ndarray] = [np.empty(0)] * len(self.weights)
        for i in range(len(self.weights) - 1, -1, -1):
            grad_w[i] = dz.T @ cache.inputs[i]
            grad_b[i] = dz.sum(axis=0)
            da = dz @ self.weights[i]
            if i > 0:
                dz = da * (cache.pre_activations[i - 1] > 0)

        dx = da[0] if cache.squeeze else da
        return Gradients(grad_w, grad_b, dx)


def soft_update(target: Mlp, online: Mlp, tau: float) -> None:
    """In place: target <- tau * online + (1 - tau) * target"""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"soft-update rate must lie in [0, 1], got {tau}")
    if target.sizes != online.sizes:
        raise ShapeMismatchError(f"target sizes {target.sizes} differ from online sizes {online.sizes}")
    for t, o in zip(target.parameters(), online.parameters(), strict=True):
        t *= 1.0 - tau
        t += tau * o
    target.mark_updated()
