from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

UNASSIGNED = -1


class Assignment(BaseModel):
    """
    Subband chosen for every UE (``UNASSIGNED`` for none)

    Holding one index per UE makes double assignment unrepresentable, so the
    single-subband and total-count constraints hold by construction.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    subband_of: tuple[int, ...]
    num_subbands: int = Field(ge=1)

    @field_validator("subband_of", mode="before")
    @classmethod
    def _as_ints(cls, value):
        return tuple(int(s) for s in value)

    @model_validator(mode="after")
    def _check_range(self) -> Assignment:
        for k, s in enumerate(self.subband_of):
            if s != UNASSIGNED and not 0 <= s < self.num_subbands:
                raise ValueError(f"UE {k} assigned to subband {s}, outside [0, {self.num_subbands})")
        return self

    @property
    def num_ues(self) -> int:
        return len(self.subband_of)

    def assigned(self) -> list[int]:
        return [k for k, s in enumerate(self.subband_of) if s != UNASSIGNED]

    def occupancy(self, s: int) -> list[int]:
        """UEs on subband s, ascending"""
        return [k for k, sk in enumerate(self.subband_of) if sk == s]

    def occupied_subbands(self) -> list[int]:
        return sorted({s for s in self.subband_of if s != UNASSIGNED})

    def to_matrix(self) -> np.ndarray:
        """Binary S x K assignment matrix"""
        matrix = np.zeros((self.num_subbands, self.num_ues), dtype=np.int8)
        for k, s in enumerate(self.subband_of):
            if s != UNASSIGNED:
                matrix[s, k] = 1
        return matrix

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> Assignment:
        problems = validate_assignment_matrix(matrix)
        if problems:
            raise ValueError("; ".join(problems))
        matrix = np.asarray(matrix)
        subband_of = [int(np.flatnonzero(col)[0]) if col.any() else UNASSIGNED for col in matrix.T]
        return cls(subband_of=subband_of, num_subbands=matrix.shape[0])

    @classmethod
    def round_robin(cls, num_ues: int, num_subbands: int) -> Assignment:
        return cls(subband_of=[k % num_subbands for k in range(num_ues)], num_subbands=num_subbands)


def validate_assignment_matrix(matrix: np.ndarray) -> list[str]:
    """
    Check a raw S x K matrix against the structural constraints

    Returns a list of human-readable problems; empty means the matrix is a
    valid assignment (binary, at most one subband per UE, at most K entries).
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        return [f"assignment matrix must be 2-D (S x K), got shape {matrix.shape}"]

    problems = []
    if not np.isin(matrix, (0, 1)).all():
        problems.append("assignment matrix entries must be 0 or 1")
    per_ue = matrix.sum(axis=0)
    for k in np.flatnonzero(per_ue > 1):
        problems.append(f"UE {int(k)} is assigned to {int(per_ue[k])} subbands")
    if matrix.sum() > matrix.shape[1]:
        problems.append(f"{int(matrix.sum())} assignments exceed K={matrix.shape[1]}")
    return problems
