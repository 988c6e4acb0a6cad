from .cfr import cfr_from_taps, generate_cfr, noise_power, noise_power_dbm, path_loss_db, subband_frequencies, uca_response
from .deployment import generate_deployment
from .models import ApPlacement, ChannelTensor, Deployment, DeploymentConfig, FadingParams, PathLossModel
from .storage import load_channels, save_channels, strongest_links, write_gain_csv

__all__ = [
    "ApPlacement",
    "ChannelTensor",
    "Deployment",
    "DeploymentConfig",
    "FadingParams",
    "PathLossModel",
    "cfr_from_taps",
    "generate_cfr",
    "generate_deployment",
    "load_channels",
    "noise_power",
    "noise_power_dbm",
    "path_loss_db",
    "save_channels",
    "strongest_links",
    "subband_frequencies",
    "uca_response",
    "write_gain_csv",
]
