from __future__ import annotations

import math
from enum import Enum
from functools import cached_property

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ApPlacement(str, Enum):
    """How access points are laid out over the area"""

    GRID = "grid"
    RANDOM = "random"


class PathLossModel(str, Enum):
    """Large-scale attenuation model"""

    UMI = "umi"
    FREE_SPACE = "free_space"


class DeploymentConfig(BaseModel):
    """Deployment geometry and numerology (defaults follow the full-scale scenario)"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    area_side_m: float = Field(1000.0, gt=0, description="Side of the square coverage area (m)")
    num_aps: int = Field(100, ge=1, description="Number of APs (L)")
    antennas_per_ap: int = Field(4, ge=1, description="Antennas per AP (N)")
    num_ues: int = Field(40, ge=0, description="Number of single-antenna UEs (K)")
    ap_height_m: float = Field(12.5, gt=0)
    ue_height_m: float = Field(1.5, gt=0)
    carrier_hz: float = Field(5.9e9, gt=0)
    bandwidth_hz: float = Field(50e6, gt=0)
    rb_hz: float = Field(180e3, gt=0, description="Resource-block (subband) width")
    num_subbands: int = Field(277, ge=1, description="Number of simulated subbands (S)")
    pilot_length: int = Field(10, ge=1, description="Pilot sequence length (tau_p)")
    max_power_w: float = Field(0.2, ge=0, description="Downlink power budget P_max (W)")
    ap_placement: ApPlacement = ApPlacement.GRID
    seed: int = Field(0, ge=0, lt=1 << 64)

    @model_validator(mode="after")
    def _check_subband_count(self) -> DeploymentConfig:
        limit = math.floor(self.bandwidth_hz / self.rb_hz) + 1
        if self.num_subbands > limit:
            raise ValueError(f"num_subbands={self.num_subbands} exceeds floor(B/B_RB)+1={limit}")
        return self


class FadingParams(BaseModel):
    """Tapped-delay-line parameters of the synthetic channel"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    num_taps: int = Field(8, ge=1)
    delay_spread_s: float = Field(300e-9, ge=0, description="RMS delay spread of the mean power-delay profile (s)")
    tap_decay: float = Field(1.0, ge=0, description="Mean tap power falls as exp(-decay * delay / span) over the span of the tap delays")
    angle_spread_deg: float = Field(10.0, ge=0, description="Std of tap arrival angles around the link's mean arrival angle")
    shadowing_sigma_db: float = Field(4.0, ge=0)
    path_loss_model: PathLossModel = PathLossModel.UMI
    noise_figure_db: float = 7.0
    array_response: bool = True


class Deployment(BaseModel):
    """AP and UE coordinates, one row per node, columns x, y, z in metres"""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    ap_positions: np.ndarray
    ue_positions: np.ndarray

    @field_validator("ap_positions", "ue_positions", mode="before")
    @classmethod
    def _three_columns(cls, value: np.ndarray) -> np.ndarray:
        array = np.asarray(value, dtype=np.float64).reshape(-1, 3)
        array.flags.writeable = False
        return array

    @property
    def num_aps(self) -> int:
        return int(self.ap_positions.shape[0])

    @property
    def num_ues(self) -> int:
        return int(self.ue_positions.shape[0])

    def distances_3d(self) -> np.ndarray:
        """K x L matrix of UE-AP distances"""
        delta = self.ue_positions[:, None, :] - self.ap_positions[None, :, :]
        return np.linalg.norm(delta, axis=-1)


class ChannelTensor(BaseModel):
    """
    Per-antenna channel frequency responses h[k, l, s, n]

    The array is frozen on construction; ``gain[k, l]`` is the linear power
    gain of link (k, l) averaged over subbands and summed over antennas.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    h: np.ndarray

    @field_validator("h", mode="before")
    @classmethod
    def _finite_complex(cls, value: np.ndarray) -> np.ndarray:
        array = np.array(value, dtype=np.complex128, copy=True)
        if array.ndim != 4:
            raise ValueError(f"channel tensor must be 4-D [K, L, S, N], got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise ValueError("channel tensor contains NaN or Inf entries")
        array.flags.writeable = False
        return array

    @property
    def num_ues(self) -> int:
        return int(self.h.shape[0])

    @property
    def num_aps(self) -> int:
        return int(self.h.shape[1])

    @property
    def num_subbands(self) -> int:
        return int(self.h.shape[2])

    @property
    def antennas_per_ap(self) -> int:
        return int(self.h.shape[3])

    @cached_property
    def gain(self) -> np.ndarray:
        power = np.sum(np.abs(self.h) ** 2, axis=-1)
        gain = power.mean(axis=-1)
        gain.flags.writeable = False
        return gain

    def row(self, k: int, s: int) -> np.ndarray:
        """Aggregated length-N*L channel of UE k on subband s (AP-major blocks)"""
        return self.h[k, :, s, :].reshape(-1)

    def rows(self, ues, s: int) -> np.ndarray:
        index = np.asarray(list(ues), dtype=np.intp)
        return self.h[index, :, s, :].reshape(index.size, -1)
