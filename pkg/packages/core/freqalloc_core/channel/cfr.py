import logging

import numpy as np

from ..errors import DegenerateGeometryError, ShapeMismatchError
from ..utils.seeding import child_rng
from .models import ChannelTensor, Deployment, DeploymentConfig, FadingParams, PathLossModel

logger = logging.getLogger(__name__)

SPEED_OF_LIGHT = 299_792_458.0
THERMAL_NOISE_DBM_PER_HZ = -174.0


def path_loss_db(distance_m, carrier_hz: float, model: PathLossModel = PathLossModel.UMI):
    """
    Path loss in dB for 3-D distance(s) in metres

    UMI: 32.4 + 21 log10(d) + 20 log10(f_c / 1 GHz)
    FREE_SPACE: 20 log10(4 pi d f_c / c)
    """
    d = np.asarray(distance_m, dtype=np.float64)
    if np.any(d <= 0):
        raise DegenerateGeometryError("AP and UE are co-located (zero 3-D distance); path loss is undefined")
    if model is PathLossModel.FREE_SPACE:
        return 20.0 * np.log10(4.0 * np.pi * d * carrier_hz / SPEED_OF_LIGHT)
    return 32.4 + 21.0 * np.log10(d) + 20.0 * np.log10(carrier_hz / 1e9)


def noise_power(config: DeploymentConfig, fading: FadingParams) -> float:
    """Thermal noise power over one resource block, in watts"""
    dbm = THERMAL_NOISE_DBM_PER_HZ + 10.0 * np.log10(config.rb_hz) + fading.noise_figure_db
    return float(10.0 ** ((dbm - 30.0) / 10.0))


def noise_power_dbm(config: DeploymentConfig, fading: FadingParams) -> float:
    return float(10.0 * np.log10(noise_power(config, fading)) + 30.0)


def subband_frequencies(config: DeploymentConfig) -> np.ndarray:
    """Centre frequency of every subband, spaced by B_RB and centred on f_c"""
    offsets = np.arange(config.num_subbands) - (config.num_subbands - 1) / 2.0
    return config.carrier_hz + offsets * config.rb_hz


def uca_response(angles: np.ndarray, num_antennas: int) -> np.ndarray:
    """
    Uniform-circular-array phase response, shape (len(angles), num_antennas)

    Adjacent elements are half a wavelength apart, so the radius in
    wavelengths is 0.5 / (2 sin(pi / N)).
    """
    angles = np.asarray(angles, dtype=np.float64)
    if num_antennas == 1:
        return np.ones((angles.size, 1), dtype=np.complex128)
    radius = 0.5 / (2.0 * np.sin(np.pi / num_antennas))
    element = 2.0 * np.pi * np.arange(num_antennas) / num_antennas
    return np.exp(1j * 2.0 * np.pi * radius * np.cos(angles[:, None] - element[None, :]))


def cfr_from_taps(gains, delays_s, frequencies_hz, steering=None) -> np.ndarray:
    """
    Frequency response of explicit taps, shape (S, N)

    h[s, n] = sum_p gains[p] * steering[p, n] * exp(-j 2 pi f_s tau_p).
    Without ``steering`` a single omnidirectional antenna is assumed.
    """
    gains = np.asarray(gains, dtype=np.complex128)
    delays = np.asarray(delays_s, dtype=np.float64)
    freqs = np.asarray(frequencies_hz, dtype=np.float64)
    if gains.shape != delays.shape:
        raise ShapeMismatchError(f"{gains.size} tap gains but {delays.size} tap delays")
    if steering is None:
        steering = np.ones((gains.size, 1), dtype=np.complex128)
    steering = np.asarray(steering, dtype=np.complex128)
    if steering.shape[0] != gains.size:
        raise ShapeMismatchError(f"steering has {steering.shape[0]} rows for {gains.size} taps")
    phases = np.exp(-2j * np.pi * freqs[:, None] * delays[None, :])
    return phases @ (gains[:, None] * steering)


def _tap_profile(rng: np.random.Generator, fading: FadingParams) -> tuple[np.ndarray, np.ndarray]:
    """
    Rayleigh tap gains and delays of one link

    Mean tap powers decay exponentially over the drawn delay span; the
    delays are then rescaled so the power-weighted RMS spread equals
    ``delay_spread_s``. The first tap always arrives at zero delay.
    """
    span = np.sort(rng.uniform(0.0, 1.0, size=fading.num_taps))
    span -= span[0]
    mean_power = np.exp(-fading.tap_decay * span)
    mean_power /= mean_power.sum()
    mean_delay = np.sum(mean_power * span)
    rms = np.sqrt(np.sum(mean_power * (span - mean_delay) ** 2))
    if rms > 0 and fading.delay_spread_s > 0:
        delays = span * (fading.delay_spread_s / rms)
    else:
        delays = np.zeros(fading.num_taps)
    fading_draw = (rng.standard_normal(fading.num_taps) + 1j * rng.standard_normal(fading.num_taps)) / np.sqrt(2.0)
    return np.sqrt(mean_power) * fading_draw, delays


def generate_cfr(deployment: Deployment, fading: FadingParams, config: DeploymentConfig) -> ChannelTensor:
    """
    Synthesize the channel tensor h[k, l, s, n] for every AP-UE link

    Each link gets its own seed stream (k, l): P Rayleigh taps with
    exponentially decaying mean powers, arrival angles clustered around a
    uniform mean angle, UMi (or free-space) path loss and log-normal
    shadowing. The small-scale response of a link is normalised to mean
    power N over subbands, so the large-scale gain is N * 10^((-PL + SH) / 10).
    """
    if deployment.num_aps != config.num_aps or deployment.num_ues != config.num_ues:
        raise ShapeMismatchError(f"deployment has {deployment.num_ues} UEs / {deployment.num_aps} APs, config expects {config.num_ues} / {config.num_aps}")

    distances = deployment.distances_3d()
    pl_db = path_loss_db(distances, config.carrier_hz, fading.path_loss_model) if distances.size else distances
    freqs = subband_frequencies(config)
    n = config.antennas_per_ap
    angle_spread = np.deg2rad(fading.angle_spread_deg)

    h = np.zeros((config.num_ues, config.num_aps, config.num_subbands, n), dtype=np.complex128)
    for k in range(config.num_ues):
        for ap in range(config.num_aps):
            rng = child_rng(config.seed, "cfr.link", k, ap)
            gains, delays = _tap_profile(rng, fading)
            angles = rng.uniform(0.0, 2.0 * np.pi) + angle_spread * rng.standard_normal(fading.num_taps)
            shadow_db = fading.shadowing_sigma_db * rng.standard_normal()
            steering = uca_response(angles, n) if fading.array_response else np.ones((fading.num_taps, n), dtype=np.complex128)
            small = cfr_from_taps(gains, delays, freqs, steering)
            power = np.mean(np.sum(np.abs(small) ** 2, axis=-1))
            if power > 0:
                small *= np.sqrt(n / power)
            amplitude = np.sqrt(10.0 ** ((-pl_db[k, ap] + shadow_db) / 10.0))
            h[k, ap] = amplitude * small

    logger.info("Generated CFR tensor K=%d L=%d S=%d N=%d (%d taps, %.0f ns RMS spread)", config.num_ues, config.num_aps, config.num_subbands, n, fading.num_taps, fading.delay_spread_s * 1e9)
    return ChannelTensor(h=h)
