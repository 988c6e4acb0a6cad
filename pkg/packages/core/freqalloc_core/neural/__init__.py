from .adam import AdamState, adam_step
from .mlp import ForwardCache, Gradients, Mlp, OutputActivation, soft_update, softmax_groups
from .replay import Batch, ReplayBuffer, Transition, buffer_push, buffer_sample, stack_batch
from .storage import load_mlp, save_mlp

__all__ = [
    "AdamState",
    "Batch",
    "ForwardCache",
    "Gradients",
    "Mlp",
    "OutputActivation",
    "ReplayBuffer",
    "Transition",
    "adam_step",
    "buffer_push",
    "buffer_sample",
    "load_mlp",
    "save_mlp",
    "soft_update",
    "softmax_groups",
    "stack_batch",
]
