import hashlib
import logging
import threading
from collections import OrderedDict

from ..channel.models import ChannelTensor
from ..clustering import ClusterMap
from ..config import freqalloc_settings
from ..phy.assignment import Assignment
from ..phy.precoding import PowerNormalization
from .evaluate import ObjectiveReport, ObjectiveWeights, evaluate, reference_se

logger = logging.getLogger(__name__)


class AllocationProblem:
    """
    One allocation instance: channel snapshot, clusters, weights, noise and power

    Every solver scores assignments through ``evaluate``, which memoizes
    reports in a bounded LRU keyed by the subband vector. The cache is
    guarded by a lock so population members may be scored from worker threads.
    """

    def __init__(
        self,
        channels: ChannelTensor,
        cluster: ClusterMap,
        weights: ObjectiveWeights,
        noise_power_w: float,
        rho: float,
        normalization: PowerNormalization = PowerNormalization.UNIT,
        cache_size: int | None = None,
    ):
        if cluster.num_ues != channels.num_ues or cluster.num_aps != channels.num_aps:
            raise ValueError(
                f"cluster map is {cluster.num_ues} UEs x {cluster.num_aps} APs, "
                f"channel is {channels.num_ues} x {channels.num_aps}"
            )
        self.channels = channels
        self.cluster = cluster
        self.weights = weights
        self.noise_power_w = noise_power_w
        self.rho = rho
        self.normalization = normalization
        self.eta_ref = reference_se(channels, cluster, noise_power_w, rho)

        self._cache_size = freqalloc_settings.EVAL_CACHE_SIZE if cache_size is None else cache_size
        self._cache: OrderedDict[tuple[int, ...], ObjectiveReport] = OrderedDict()
        self._lock = threading.Lock()
        self.evaluations = 0
        self._hash: str | None = None

    @property
    def num_ues(self) -> int:
        return self.channels.num_ues

    @property
    def num_subbands(self) -> int:
        return self.channels.num_subbands

    def evaluate(self, assignment: Assignment) -> ObjectiveReport:
        key = assignment.subband_of
        with self._lock:
            report = self._cache.get(key)
            if report is not None:
                self._cache.move_to_end(key)
                return report

        report = evaluate(
            assignment,
            self.channels,
            self.cluster,
            self.weights,
            self.noise_power_w,
            self.rho,
            self.normalization,
            eta_ref=self.eta_ref,
        )

        with self._lock:
            self.evaluations += 1
            if self._cache_size > 0:
                self._cache[key] = report
                if len(self._cache) > self._cache_size:
                    self._cache.popitem(last=False)
        return report

    def score(self, assignment: Assignment) -> float:
        return self.evaluate(assignment).normalized_value

    def instance_hash(self) -> str:
        """SHA-256 over the channel bytes, clusters, weights, noise, power and normalization"""
        if self._hash is None:
            digest = hashlib.sha256()
            digest.update(self.channels.h.astype("<c16").tobytes())
            digest.update(repr(self.channels.h.shape).encode())
            digest.update(repr(self.cluster.serves).encode())
            digest.update(self.weights.model_dump_json().encode())
            digest.update(f"{self.noise_power_w!r}|{self.rho!r}|{self.normalization.value}".encode())
            self._hash = digest.hexdigest()
        return self._hash
