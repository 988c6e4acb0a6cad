from .aquila import AoConfig, AoResult, ao_optimize, aquila_search, levy_flight
from .ddpg import SEARCH_RANGES, AgentBundle, DdpgHyper, NetworkConfig, ddpg_train, noisy_sample, td_target, train_agent
from .encoding import decode, encode, from_scores, one_hot
from .env import AllocationEnv, Environment, StepResult, env_step, masked_gain_features
from .hybrid import AoExplorer, HybridConfig, hybrid_train
from .trace import TraceRecord, TrainTrace
from .tuning import TrialSummary, TuningRanges, ddpg_trainer, random_search, sample_hyper

__all__ = [
    "SEARCH_RANGES",
    "AgentBundle",
    "AllocationEnv",
    "AoConfig",
    "AoExplorer",
    "AoResult",
    "DdpgHyper",
    "Environment",
    "HybridConfig",
    "NetworkConfig",
    "StepResult",
    "TraceRecord",
    "TrainTrace",
    "TrialSummary",
    "TuningRanges",
    "ao_optimize",
    "aquila_search",
    "ddpg_train",
    "ddpg_trainer",
    "decode",
    "encode",
    "env_step",
    "from_scores",
    "hybrid_train",
    "levy_flight",
    "masked_gain_features",
    "noisy_sample",
    "one_hot",
    "random_search",
    "sample_hyper",
    "td_target",
    "train_agent",
]
