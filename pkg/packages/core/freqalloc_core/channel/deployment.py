import logging
import math

import numpy as np

from ..utils.seeding import child_rng
from .models import ApPlacement, Deployment, DeploymentConfig

logger = logging.getLogger(__name__)


def _grid_positions(num_aps: int, side: float) -> np.ndarray:
    per_row = math.ceil(math.sqrt(num_aps))
    spacing = side / per_row
    cells = np.arange(per_row * per_row)[:num_aps]
    x = (cells % per_row + 0.5) * spacing
    y = (cells // per_row + 0.5) * spacing
    return np.column_stack([x, y])


def generate_deployment(config: DeploymentConfig) -> Deployment:
    """
    Place APs and UEs over the square area

    APs sit on a ceil(sqrt(L)) x ceil(sqrt(L)) grid truncated to L points
    (or uniformly at random with ``ap_placement=random``); UEs are always
    uniform. Each placement draws from its own seed stream.
    """
    side = config.area_side_m
    if config.ap_placement is ApPlacement.GRID:
        ap_xy = _grid_positions(config.num_aps, side)
    else:
        ap_xy = child_rng(config.seed, "deployment.aps").uniform(0.0, side, size=(config.num_aps, 2))

    ue_xy = child_rng(config.seed, "deployment.ues").uniform(0.0, side, size=(config.num_ues, 2))

    aps = np.column_stack([ap_xy, np.full(config.num_aps, config.ap_height_m)])
    ues = np.column_stack([ue_xy, np.full(config.num_ues, config.ue_height_m)]) if config.num_ues else np.zeros((0, 3))

    logger.debug("Deployment: %d APs (%s), %d UEs over %.0f m, seed=%d", config.num_aps, config.ap_placement.value, config.num_ues, side, config.seed)
    return Deployment(ap_positions=aps, ue_positions=ues)
