"""
User-centric AP clustering

Each UE is served by a subset of APs. The block-diagonal selector D_k of the
system model is kept as that index set; ``mask_channel`` applies it to an
aggregated length-N*L channel row without ever building the NL x NL matrix.
"""

import csv
import logging
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import FormatError, ShapeMismatchError

logger = logging.getLogger(__name__)


class ClusterMap(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    serves: tuple[tuple[int, ...], ...] = Field(description="Sorted serving-AP indices per UE")
    cluster_size: int = Field(ge=1, description="Requested M")
    num_aps: int = Field(ge=1, description="L")
    clamped: bool = Field(False, description="M was larger than L and got clamped")

    @field_validator("serves", mode="before")
    @classmethod
    def _sorted_sets(cls, value):
        return tuple(tuple(sorted({int(ap) for ap in aps})) for aps in value)

    @model_validator(mode="after")
    def _check_indices(self) -> "ClusterMap":
        limit = min(self.cluster_size, self.num_aps)
        for k, aps in enumerate(self.serves):
            if len(aps) > limit:
                raise ValueError(f"UE {k} is served by {len(aps)} APs, more than min(M, L)={limit}")
            if aps and (aps[0] < 0 or aps[-1] >= self.num_aps):
                raise ValueError(f"UE {k} references an AP outside [0, {self.num_aps})")
        return self

    @property
    def num_ues(self) -> int:
        return len(self.serves)

    def membership(self) -> np.ndarray:
        """K x L boolean matrix, True where AP l serves UE k"""
        table = np.zeros((self.num_ues, self.num_aps), dtype=bool)
        for k, aps in enumerate(self.serves):
            table[k, list(aps)] = True
        return table


def select_serving_aps(gains: np.ndarray, cluster_size: int) -> ClusterMap:
    """Top-M APs per UE by large-scale gain, ties going to the lower AP index"""
    g = np.asarray(gains, dtype=np.float64)
    if g.ndim != 2:
        raise ShapeMismatchError(f"gain matrix must be K x L, got shape {g.shape}")
    if cluster_size < 1:
        raise ValueError(f"cluster size must be at least 1, got {cluster_size}")
    if not np.all(np.isfinite(g)) or np.any(g < 0):
        raise ValueError("large-scale gains must be finite and nonnegative")

    num_aps = g.shape[1]
    m = cluster_size
    clamped = False
    if m > num_aps:
        logger.warning("Cluster size %d exceeds the %d available APs, clamping", m, num_aps)
        m = num_aps
        clamped = True

    # stable sort on -g keeps the lower index first among equal gains
    order = np.argsort(-g, axis=1, kind="stable")[:, :m]
    return ClusterMap(serves=[row.tolist() for row in order], cluster_size=m, num_aps=num_aps, clamped=clamped)


def _block_mask(cluster: ClusterMap, k: int, antennas: int) -> np.ndarray:
    mask = np.zeros(cluster.num_aps * antennas, dtype=bool)
    for ap in cluster.serves[k]:
        mask[ap * antennas : (ap + 1) * antennas] = True
    return mask


def antenna_mask(cluster: ClusterMap, k: int, antennas: int) -> np.ndarray:
    """Boolean mask over the aggregated row selecting the antennas of UE k's serving APs"""
    return _block_mask(cluster, k, antennas)


def mask_channel(row: np.ndarray, cluster: ClusterMap, k: int) -> np.ndarray:
    row = np.asarray(row)
    if row.size % cluster.num_aps:
        raise ShapeMismatchError(f"row length {row.size} is not a multiple of L={cluster.num_aps}")
    antennas = row.size // cluster.num_aps
    return np.where(_block_mask(cluster, k, antennas), row, 0)


def clusters_overlap(cluster: ClusterMap, i: int, k: int) -> bool:
    return not set(cluster.serves[i]).isdisjoint(cluster.serves[k])


def overlap_matrix(cluster: ClusterMap) -> np.ndarray:
    """K x K boolean matrix of clusters_overlap for every pair"""
    member = cluster.membership().astype(np.int64)
    return (member @ member.T) > 0


def selector_matrix(cluster: ClusterMap, k: int, antennas: int) -> np.ndarray:
    """Dense NL x NL selector D_k; only meant for small instances and checks"""
    return np.diag(_block_mask(cluster, k, antennas).astype(np.float64))


def save_cluster_csv(cluster: ClusterMap, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["ue_index", "ap_index_list"])
        for k, aps in enumerate(cluster.serves):
            writer.writerow([k, ";".join(str(ap) for ap in aps)])
    return path


def load_cluster_csv(path: Path, num_aps: int, cluster_size: int | None = None) -> ClusterMap:
    path = Path(path)
    serves: list[tuple[int, ...]] = []
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != ["ue_index", "ap_index_list"]:
            raise FormatError(f"{path}: unexpected cluster CSV header {header}")
        for lineno, record in enumerate(reader, start=2):
            if len(record) != 2 or int(record[0]) != len(serves):
                raise FormatError(f"{path}:{lineno}: expected row for UE {len(serves)}, got {record}")
            serves.append(tuple(int(ap) for ap in record[1].split(";") if ap.strip()))

    size = cluster_size or max((len(aps) for aps in serves), default=1) or 1
    return ClusterMap(serves=serves, cluster_size=size, num_aps=num_aps)
