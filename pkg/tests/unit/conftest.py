"""Shared fixtures for unit tests.

Instances are tiny synthetic snapshots so solver tests run in seconds.
"""

import pytest

from freqalloc_core.channel import DeploymentConfig, FadingParams, generate_cfr, generate_deployment, noise_power
from freqalloc_core.clustering import select_serving_aps
from freqalloc_core.objective import AllocationProblem, ObjectiveWeights
from freqalloc_core.phy import equal_power


def build_problem(num_ues=4, num_subbands=4, num_aps=4, antennas=2, cluster_size=2, seed=0, weights=None) -> AllocationProblem:
    config = DeploymentConfig(
        area_side_m=200,
        num_aps=num_aps,
        antennas_per_ap=antennas,
        num_ues=num_ues,
        num_subbands=num_subbands,
        seed=seed,
    )
    fading = FadingParams()
    channels = generate_cfr(generate_deployment(config), fading, config)
    cluster = select_serving_aps(channels.gain, cluster_size)
    return AllocationProblem(
        channels,
        cluster,
        weights or ObjectiveWeights(),
        noise_power(config, fading),
        equal_power(config.max_power_w, config.pilot_length),
    )


@pytest.fixture
def small_problem() -> AllocationProblem:
    return build_problem()
