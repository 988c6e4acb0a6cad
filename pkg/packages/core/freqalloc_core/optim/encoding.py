"""Continuous relaxation of an assignment: one real coordinate per UE in [0, S)"""

import numpy as np

from ..phy.assignment import Assignment


def decode(x: np.ndarray, num_subbands: int) -> Assignment:
    """a_k = min(floor(x_k), S - 1), clipped below at 0 so every vector decodes"""
    index = np.floor(np.asarray(x, dtype=np.float64))
    index = np.clip(np.nan_to_num(index, nan=0.0), 0, num_subbands - 1).astype(np.int64)
    return Assignment(subband_of=index.tolist(), num_subbands=num_subbands)


def encode(assignment: Assignment) -> np.ndarray:
    """Centre of each UE's subband cell; ``decode(encode(a)) == a`` for fully assigned ``a``"""
    return np.asarray(assignment.subband_of, dtype=np.float64) + 0.5


def one_hot(assignment: Assignment) -> np.ndarray:
    """Flattened K x S indicator (row k is UE k), zero rows for unassigned UEs"""
    table = np.zeros((assignment.num_ues, assignment.num_subbands))
    for k, s in enumerate(assignment.subband_of):
        if s >= 0:
            table[k, s] = 1.0
    return table.reshape(-1)


def from_scores(scores: np.ndarray, num_subbands: int) -> Assignment:
    """Per-UE argmax over a flattened K x S score vector (ties to the lower subband)"""
    table = np.asarray(scores, dtype=np.float64).reshape(-1, num_subbands)
    return Assignment(subband_of=np.argmax(table, axis=1).tolist(), num_subbands=num_subbands)
