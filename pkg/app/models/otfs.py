"""
OTFS link configuration, channel draws, transmit streams and trial records.
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.core.config import settings

SPEED_OF_LIGHT = 299_792_458.0


class OtfsConfig(BaseModel):
    """Link parameters; defaults follow the reference system table."""
    T_doppler_bins: int = Field(8, ge=2, description="Doppler bins per frame")
    L_delay_bins: int = Field(16, ge=2, description="delay bins per frame")
    f_c: float = Field(6e9, gt=0, description="carrier frequency [Hz]")
    delta_f: float = Field(15e3, gt=0, description="subcarrier spacing [Hz]")
    C_paths: int = Field(3, ge=1, description="number of channel paths")
    v_max: float = Field(200.0, ge=0, description="maximum velocity [km/h]")
    r_tau: float = Field(2.3, gt=1, description="delay proportionality factor")
    sigma_tau: float = Field(1.5e-6, gt=0, description="RMS delay spread [s]")
    Z_p_dB: float = Field(0.0, description="additional per-path fading [dB]")
    cp_len: int = Field(32, ge=0, description="cyclic prefix [samples]")
    window_len: int = Field(128, ge=1, description="sync correlation window [samples]")

    @model_validator(mode="after")
    def check_frame_geometry(self) -> "OtfsConfig":
        if self.window_len != self.frame_len:
            raise ValueError(f"window_len must equal L*T = {self.frame_len}")
        if self.C_paths - 1 >= self.L_delay_bins:
            raise ValueError("largest path delay must stay below L delay bins")
        if self.cp_len < self.C_paths - 1:
            raise ValueError("cyclic prefix shorter than the channel delay spread")
        if self.cp_len > self.frame_len:
            raise ValueError("cyclic prefix longer than a frame")
        return self

    @property
    def frame_len(self) -> int:
        return self.L_delay_bins * self.T_doppler_bins

    @property
    def bandwidth(self) -> float:
        return self.T_doppler_bins * self.delta_f

    @property
    def frame_duration(self) -> float:
        return 1.0 / self.delta_f

    @property
    def sample_period(self) -> float:
        return 1.0 / self.bandwidth

    @property
    def max_doppler(self) -> float:
        """f_c * v_max / c in Hz."""
        return self.f_c * (self.v_max / 3.6) / SPEED_OF_LIGHT

    @property
    def block_len(self) -> int:
        """Samples per CP-prefixed frame."""
        return self.cp_len + self.frame_len


@dataclass(frozen=True)
class ChannelPath:
    delay_bins: int
    doppler_hz: float
    coeff: complex


@dataclass(frozen=True)
class ChannelRealization:
    """One doubly selective channel draw, one path per delay bin."""

    paths: Tuple[ChannelPath, ...]

    @classmethod
    def identity(cls) -> "ChannelRealization":
        return cls(paths=(ChannelPath(0, 0.0, 1.0 + 0.0j),))

    @property
    def delays(self) -> np.ndarray:
        return np.array([p.delay_bins for p in self.paths], dtype=np.int64)

    @property
    def dopplers(self) -> np.ndarray:
        return np.array([p.doppler_hz for p in self.paths])

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([p.coeff for p in self.paths], dtype=np.complex128)

    @property
    def max_delay(self) -> int:
        return int(self.delays.max())


@dataclass(frozen=True)
class TxStream:
    """
    Three CP-prefixed frames (data | preamble | data) before truncation.

    ``truncation`` samples are cut from the head of the received stream, which
    puts the preamble body at ``true_offset`` in the truncated stream.
    """

    samples: np.ndarray
    frame_starts: Tuple[int, ...]
    truncation: int
    true_offset: int
    reference: np.ndarray
    data_bits: Tuple[np.ndarray, ...] = field(default=())
    data_frames: Tuple[int, ...] = (0, 2)

    def truncate(self, received: np.ndarray) -> np.ndarray:
        return received[self.truncation:]


class SyncTrialResult(BaseModel):
    true_offset: int
    detected_offset: int
    success: bool
    snr_db: Optional[float] = Field(None, description="None for a noiseless trial")
    seed: int = Field(..., description="trial index of the seed substream")
    peak_doppler_hz: Optional[float] = None


class PreambleKind(str, Enum):
    PROPOSED = "proposed"
    RANDOM_QPSK = "random_qpsk"
    FILE = "file"


class PreambleSelector(BaseModel):
    """Which sequence is placed in the synchronisation frame."""
    kind: PreambleKind = PreambleKind.PROPOSED
    theorem: str = "T3"
    R: int = 2
    T: int = 8
    u: int = 1
    m: int = 0
    q: Optional[int] = None
    index_rows: Optional[List[List[int]]] = Field(
        default_factory=lambda: [[0, 1, 3, 5, 7, 4, 2, 6]],
        description="explicit index rows; None uses the Construction-I array",
    )
    path: Optional[str] = Field(None, description="sequence file for kind='file'")

    @model_validator(mode="after")
    def check_file(self) -> "PreambleSelector":
        if self.kind is PreambleKind.FILE and not self.path:
            raise ValueError("path is required when kind is 'file'")
        return self


class SimMode(str, Enum):
    SYNC = "sync"
    BER = "ber"
    VELOCITY_SWEEP = "velocity-sweep"


class CampaignConfig(BaseModel):
    """A simulation campaign read from JSON."""
    mode: SimMode = SimMode.SYNC
    otfs: OtfsConfig = Field(default_factory=OtfsConfig)
    snr_list: List[float] = Field(default_factory=lambda: list(settings.SIM_SNR_LIST))
    trials: int = Field(default_factory=lambda: settings.SIM_TRIALS, ge=1)
    master_seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED, ge=0)
    preamble: PreambleSelector = Field(default_factory=PreambleSelector)
    compare_random: bool = Field(True, description="also run the random-QPSK preamble with the same seeds")
    velocities: List[float] = Field(default_factory=lambda: [0.0, 50.0, 100.0, 150.0, 200.0, 250.0, 300.0])
    sweep_snr_db: float = 20.0
    workers: int = Field(default_factory=lambda: settings.SIM_WORKERS, ge=1)

    @field_validator("snr_list")
    @classmethod
    def check_snr_list(cls, v: List[float]) -> List[float]:
        if not v:
            raise ValueError("snr_list must not be empty")
        return v

    @field_validator("velocities")
    @classmethod
    def check_velocities(cls, v: List[float]) -> List[float]:
        if any(x < 0 for x in v):
            raise ValueError("velocities must be nonnegative")
        return v


class SimPoint(BaseModel):
    """One row of a results table."""
    preamble: str
    snr_db: float
    v_max: float
    trials: int
    successes: int
    success_prob: float
    ci_low: float
    ci_high: float
    ber: Optional[float] = None
    ber_perfect_sync: Optional[float] = None
