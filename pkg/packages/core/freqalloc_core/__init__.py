from .channel import ChannelTensor, Deployment, DeploymentConfig, FadingParams, generate_cfr, generate_deployment, load_channels, save_channels
from .clustering import ClusterMap, select_serving_aps
from .config import FreqallocSettings, freqalloc_settings
from .errors import ConfigError, FormatError, FreqallocError, ZfInfeasibleError
from .logging import get_logger, setup_logging
from .objective import AllocationProblem, ObjectiveReport, ObjectiveWeights, evaluate
from .phy import Assignment, PowerNormalization, evaluate_phy

__version__ = "0.1.0"

__all__ = [
    "ChannelTensor",
    "Deployment",
    "DeploymentConfig",
    "FadingParams",
    "generate_cfr",
    "generate_deployment",
    "load_channels",
    "save_channels",
    "ClusterMap",
    "select_serving_aps",
    "Assignment",
    "PowerNormalization",
    "evaluate_phy",
    "AllocationProblem",
    "ObjectiveReport",
    "ObjectiveWeights",
    "evaluate",
    "FreqallocError",
    "ConfigError",
    "FormatError",
    "ZfInfeasibleError",
    "FreqallocSettings",
    "freqalloc_settings",
    "get_logger",
    "setup_logging",
]
