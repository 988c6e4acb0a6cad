import numpy as np
import scipy.linalg

from ..channel.models import ChannelTensor
from ..clustering import ClusterMap, antenna_mask
from ..phy.assignment import Assignment


def total_se(se) -> float:
    """Sum of per-UE spectral efficiencies (bits/s/Hz)"""
    return float(np.sum(np.asarray(se, dtype=np.float64)))


def gini(se) -> float:
    """
    Gini index of per-UE SE, in [0, (K-1)/K]

    Uses the sorted form: sum_i sum_j |x_i - x_j| = 2 * sum_i (2i - K - 1) x_(i)
    with 1-based ranks. Returns 0 when the mean SE is not positive.
    """
    x = np.sort(np.asarray(se, dtype=np.float64))
    k = x.size
    if k == 0:
        raise ValueError("Gini index needs at least one UE")
    mean = x.mean()
    if mean <= 0:
        return 0.0
    ranks = np.arange(1, k + 1)
    pairwise = 2.0 * np.sum((2 * ranks - k - 1) * x)
    # rounding can leave a tiny negative sum for equal inputs
    return max(0.0, float(pairwise / (2.0 * k * k * mean)))


def subband_gram(channels: ChannelTensor, cluster: ClusterMap, ues: list[int], s: int) -> np.ndarray:
    """
    Gram matrix of the unit-normalized masked channels of ``ues`` on subband s

    Each row is masked by its own UE's serving set. A row with zero masked
    power stays zero.
    """
    antennas = channels.antennas_per_ap
    rows = channels.rows(ues, s).copy()
    for i, k in enumerate(ues):
        rows[i, ~antenna_mask(cluster, k, antennas)] = 0.0
    norms = np.linalg.norm(rows, axis=1)
    rows[norms > 0] /= norms[norms > 0, None]
    return rows @ rows.conj().T


def min_eigenvalue(channels: ChannelTensor, cluster: ClusterMap, assignment: Assignment) -> float:
    """Smallest eigenvalue over the per-subband Gram matrices; 1.0 when nothing is assigned"""
    smallest = 1.0
    occupied = assignment.occupied_subbands()
    if not occupied:
        return smallest
    smallest = np.inf
    for s in occupied:
        eigenvalues = scipy.linalg.eigvalsh(subband_gram(channels, cluster, assignment.occupancy(s), s))
        smallest = min(smallest, float(eigenvalues[0]))
    return smallest
