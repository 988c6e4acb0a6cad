import csv
import logging
from enum import Enum
from pathlib import Path

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict

from ..channel.models import ChannelTensor
from ..clustering import ClusterMap, antenna_mask, clusters_overlap
from ..config import freqalloc_settings
from ..errors import ShapeMismatchError, UnassignedUeError, ZfInfeasibleError
from .assignment import UNASSIGNED, Assignment

logger = logging.getLogger(__name__)


class PowerNormalization(str, Enum):
    """How the raw ZF column is scaled to the allocated power"""

    UNIT = "unit"  # w <- sqrt(rho) * w / ||w||
    AS_PRINTED = "as_printed"  # w <- sqrt(rho / ||w||) * w


class PrecodeResult(BaseModel):
    """
    Precoders and link quality for one assignment

    ``w`` is K x NL (zero rows for unassigned or outage UEs), ``rho`` the
    allocated power per UE, ``sinr`` linear, ``se`` in bits/s/Hz.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    w: np.ndarray
    rho: np.ndarray
    sinr: np.ndarray
    se: np.ndarray
    zf_infeasible: tuple[int, ...] = ()

    @property
    def flags(self) -> list[str]:
        return [f"zf_infeasible:{k}" for k in self.zf_infeasible]


def equal_power(max_power_w: float, pilot_length: int) -> float:
    if pilot_length < 1:
        raise ValueError(f"pilot length must be at least 1, got {pilot_length}")
    return max_power_w / pilot_length


def interference_members(assignment: Assignment, cluster: ClusterMap, k: int) -> list[int]:
    """UE k followed by its co-channel UEs that share at least one serving AP, ascending"""
    s = assignment.subband_of[k]
    if s == UNASSIGNED:
        raise UnassignedUeError(f"UE {k} holds no subband, so it has no interference set")
    others = [i for i in assignment.occupancy(s) if i != k and clusters_overlap(cluster, i, k)]
    return [k, *others]


def zf_precoder(
    rows: np.ndarray,
    mask: np.ndarray,
    rho: float,
    normalization: PowerNormalization = PowerNormalization.UNIT,
    condition_limit: float | None = None,
) -> np.ndarray:
    """
    Zero-forcing precoder of the UE whose channel is ``rows[0]``

    The raw precoder is the first column of D H^H (H D H^H)^-1, where D keeps
    the antennas selected by ``mask``; it is then scaled to power ``rho``.
    Raises ZfInfeasibleError when the group outnumbers the usable antennas or
    H D H^H is singular or too ill-conditioned.
    """
    rows = np.atleast_2d(np.asarray(rows, dtype=np.complex128))
    mask = np.asarray(mask, dtype=bool)
    if rows.shape[1] != mask.size:
        raise ShapeMismatchError(f"channel rows have length {rows.shape[1]}, mask has {mask.size}")

    limit = freqalloc_settings.ZF_CONDITION_LIMIT if condition_limit is None else condition_limit
    group, usable = rows.shape[0], int(mask.sum())
    if group > usable:
        raise ZfInfeasibleError(f"{group} co-channel UEs but only {usable} serving antennas")

    h_masked = rows[:, mask]
    gram = h_masked @ h_masked.conj().T
    with np.errstate(divide="ignore", invalid="ignore"):
        condition = np.linalg.cond(gram)
    if not np.isfinite(condition) or condition > limit:
        raise ZfInfeasibleError(f"H D H^H is ill-conditioned (condition number {condition:.3g})")

    unit = np.zeros(group, dtype=np.complex128)
    unit[0] = 1.0
    w_masked = h_masked.conj().T @ scipy.linalg.solve(gram, unit, assume_a="her")

    w = np.zeros(mask.size, dtype=np.complex128)
    if rho <= 0:
        return w

    norm = float(np.linalg.norm(w_masked))
    if normalization is PowerNormalization.AS_PRINTED:
        scale = np.sqrt(rho / norm)
    else:
        scale = np.sqrt(rho) / norm
    w[mask] = scale * w_masked
    return w


def evaluate_phy(
    channels: ChannelTensor,
    cluster: ClusterMap,
    assignment: Assignment,
    noise_power_w: float,
    rho: float,
    normalization: PowerNormalization = PowerNormalization.UNIT,
) -> PrecodeResult:
    """
    ZF precoders, SINR and spectral efficiency for every UE

    Interference at UE k sums over all other UEs on its subband, whether or
    not their precoders were built to null it. Unassigned and ZF-infeasible
    UEs get SE 0; the latter are listed in ``zf_infeasible``.
    """
    if assignment.num_ues != channels.num_ues or cluster.num_ues != channels.num_ues:
        raise ShapeMismatchError(
            f"assignment ({assignment.num_ues}) / cluster ({cluster.num_ues}) / channel ({channels.num_ues}) UE counts differ"
        )
    if assignment.num_subbands != channels.num_subbands:
        raise ShapeMismatchError(f"assignment has {assignment.num_subbands} subbands, channel has {channels.num_subbands}")

    num_ues = channels.num_ues
    antennas = channels.antennas_per_ap
    w = np.zeros((num_ues, channels.num_aps * antennas), dtype=np.complex128)
    rho_k = np.zeros(num_ues)
    sinr = np.zeros(num_ues)
    infeasible: list[int] = []

    for s in assignment.occupied_subbands():
        members = assignment.occupancy(s)
        for k in members:
            rho_k[k] = rho
            group = interference_members(assignment, cluster, k)
            try:
                w[k] = zf_precoder(channels.rows(group, s), antenna_mask(cluster, k, antennas), rho, normalization)
            except ZfInfeasibleError as e:
                logger.debug("UE %d on subband %d in outage: %s", k, s, e)
                infeasible.append(k)

        h_s = channels.rows(members, s)
        received = np.abs(h_s @ w[members].T) ** 2
        signal = np.diag(received)
        interference = received.sum(axis=1) - signal
        sinr[members] = signal / (interference + noise_power_w)

    sinr[infeasible] = 0.0
    se = np.log2(1.0 + sinr)
    return PrecodeResult(w=w, rho=rho_k, sinr=sinr, se=se, zf_infeasible=tuple(sorted(infeasible)))


def write_se_csv(result: PrecodeResult, assignment: Assignment, path: Path) -> Path:
    """One row per UE: ue_index, subband, sinr_db, se_bps_hz (empty fields for unassigned UEs)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["ue_index", "subband", "sinr_db", "se_bps_hz"])
        for k, s in enumerate(assignment.subband_of):
            if s == UNASSIGNED:
                writer.writerow([k, "", "", f"{0.0:.6f}"])
                continue
            sinr_db = f"{10.0 * np.log10(result.sinr[k]):.6f}" if result.sinr[k] > 0 else ""
            writer.writerow([k, s, sinr_db, f"{result.se[k]:.6f}"])
    return path
