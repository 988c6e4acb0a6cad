from __future__ import annotations

import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..channel.models import ChannelTensor
from ..clustering import ClusterMap
from ..phy.assignment import Assignment
from ..phy.precoding import PowerNormalization, PrecodeResult, evaluate_phy
from .metrics import gini, min_eigenvalue, total_se

logger = logging.getLogger(__name__)

POWER_TOLERANCE = 1e-12


class ObjectiveWeights(BaseModel):
    """Weights and thresholds of the scalarized objective"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    w_eta: float = Field(0.6, ge=0, description="Weight of the normalized total SE")
    w_evd: float = Field(0.2, ge=0, description="Weight of the minimum Gram eigenvalue")
    w_gini: float = Field(0.2, ge=0, description="Weight of the Gini penalty")
    eta_th: float = Field(1.0, ge=0, description="Per-UE SE floor (bits/s/Hz)")
    rho_max: float | None = Field(None, ge=0, description="Total power cap (W); None means K * P_max / tau_p")

    @model_validator(mode="after")
    def _not_all_zero(self) -> ObjectiveWeights:
        if self.w_eta == 0 and self.w_evd == 0 and self.w_gini == 0:
            raise ValueError("at least one of w_eta, w_evd, w_gini must be positive")
        return self

    def power_cap(self, num_ues: int, rho: float) -> float:
        return num_ues * rho if self.rho_max is None else self.rho_max


class ConstraintViolations(BaseModel):
    model_config = ConfigDict(frozen=True)

    power_exceeded: bool = False
    below_se_floor: int = Field(0, ge=0, description="Number of assigned UEs below eta_th")
    multi_subband: bool = False
    over_assigned: bool = False

    @property
    def any(self) -> bool:
        return self.power_exceeded or self.below_se_floor > 0 or self.multi_subband or self.over_assigned

    @property
    def count(self) -> int:
        return int(self.power_exceeded) + self.below_se_floor + int(self.multi_subband) + int(self.over_assigned)

    def labels(self) -> list[str]:
        labels = []
        if self.power_exceeded:
            labels.append("power")
        if self.below_se_floor:
            labels.append(f"se_floor:{self.below_se_floor}")
        if self.multi_subband:
            labels.append("multi_subband")
        if self.over_assigned:
            labels.append("over_assigned")
        return labels


class ObjectiveReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    total_se: float
    gini: float = Field(ge=0, le=1)
    lambda_min: float
    se_term: float
    normalized_value: float
    violations: ConstraintViolations
    flags: tuple[str, ...] = ()
    se: tuple[float, ...] = ()

    @property
    def feasible(self) -> bool:
        return not self.violations.any


def check_constraints(
    result: PrecodeResult,
    assignment: Assignment,
    weights: ObjectiveWeights,
    rho: float,
) -> ConstraintViolations:
    assigned = assignment.assigned()
    cap = weights.power_cap(assignment.num_ues, rho)
    allocated = float(np.sum(result.rho))
    below = sum(1 for k in assigned if result.se[k] < weights.eta_th)

    matrix = assignment.to_matrix()
    return ConstraintViolations(
        power_exceeded=allocated > cap * (1.0 + POWER_TOLERANCE),
        below_se_floor=below,
        multi_subband=bool(np.any(matrix.sum(axis=0) > 1)),
        over_assigned=int(matrix.sum()) > assignment.num_ues,
    )


def reference_se(channels: ChannelTensor, cluster: ClusterMap, noise_power_w: float, rho: float) -> float:
    """
    K * log2(1 + mean interference-free SNR)

    A UE's interference-free SNR is rho times the subband-averaged gain of its
    serving APs over the noise power.
    """
    if channels.num_ues == 0:
        return 0.0
    membership = cluster.membership()
    served_gain = np.sum(np.where(membership, channels.gain, 0.0), axis=1)
    snr = rho * served_gain / noise_power_w
    return float(channels.num_ues * np.log2(1.0 + snr.mean()))


def evaluate(
    assignment: Assignment,
    channels: ChannelTensor,
    cluster: ClusterMap,
    weights: ObjectiveWeights,
    noise_power_w: float,
    rho: float,
    normalization: PowerNormalization = PowerNormalization.UNIT,
    eta_ref: float | None = None,
) -> ObjectiveReport:
    """
    Score an assignment with the weighted objective

    value = w_eta * eta_total / eta_ref + w_evd * lambda_min - w_gini * gini
    minus w_eta for every assigned UE under the SE floor. ZF outages count as
    SE 0 and are listed in ``flags``.
    """
    phy = evaluate_phy(channels, cluster, assignment, noise_power_w, rho, normalization)
    flags = list(phy.flags)

    eta_total = total_se(phy.se)
    if phy.se.size and phy.se.mean() <= 0:
        flags.append("gini_degenerate")
    inequality = gini(phy.se) if phy.se.size else 0.0

    if not assignment.assigned():
        flags.append("lambda_min_empty")
    lambda_min = min_eigenvalue(channels, cluster, assignment)

    if eta_ref is None:
        eta_ref = reference_se(channels, cluster, noise_power_w, rho)
    se_term = eta_total / eta_ref if eta_ref > 0 else 0.0

    violations = check_constraints(phy, assignment, weights, rho)
    value = (
        weights.w_eta * se_term
        + weights.w_evd * lambda_min
        - weights.w_gini * inequality
        - weights.w_eta * violations.below_se_floor
    )
    return ObjectiveReport(
        total_se=eta_total,
        gini=inequality,
        lambda_min=lambda_min,
        se_term=se_term,
        normalized_value=float(value),
        violations=violations,
        flags=tuple(flags),
        se=tuple(float(x) for x in phy.se),
    )
