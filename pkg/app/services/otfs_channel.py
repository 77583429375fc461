"""
Doubly selective channel: path draws, stream propagation, AWGN and the
per-frame channel operator used by the equalizer.
"""
from typing import Optional

import numpy as np
import structlog

from app.core.exceptions import InvalidParameterError
from app.models.otfs import ChannelPath, ChannelRealization, OtfsConfig

logger = structlog.get_logger()


def path_powers(cfg: OtfsConfig) -> np.ndarray:
    """q_p = exp(-tau_p (r - 1) / (r sigma)) * 10^(-Z_p/10) with tau_p = p * T_s."""
    tau = np.arange(cfg.C_paths) * cfg.sample_period
    return np.exp(-tau * (cfg.r_tau - 1) / (cfg.r_tau * cfg.sigma_tau)) * 10 ** (-cfg.Z_p_dB / 10)


def gen_channel(cfg: OtfsConfig, rng: np.random.Generator) -> ChannelRealization:
    """
    Draw one path per delay bin 0..C-1 with h_p ~ CN(0, q_p) and Jakes Doppler
    nu_p = nu_max cos(theta_p), theta_p uniform on [0, 2pi).
    """
    q = path_powers(cfg)
    h = np.sqrt(q / 2) * (rng.standard_normal(cfg.C_paths) + 1j * rng.standard_normal(cfg.C_paths))
    theta = rng.uniform(0.0, 2 * np.pi, size=cfg.C_paths)
    nu = cfg.max_doppler * np.cos(theta)
    return ChannelRealization(
        paths=tuple(ChannelPath(int(p), float(nu[p]), complex(h[p])) for p in range(cfg.C_paths))
    )


def propagate(samples: np.ndarray, channel: ChannelRealization, sample_period: float) -> np.ndarray:
    """
    Noiseless output r(n) = sum_p h_p s(n - tau_p) exp(i2pi nu_p (n - tau_p) T_s).

    The stream starts at n = 0; samples before it are zero and the output keeps
    the input length.
    """
    s = np.asarray(samples, dtype=np.complex128)
    n = np.arange(s.size)
    out = np.zeros_like(s)
    for path in channel.paths:
        d = path.delay_bins
        if d >= s.size:
            continue
        rotated = s * np.exp(2j * np.pi * path.doppler_hz * n * sample_period)
        out[d:] += path.coeff * rotated[: s.size - d]
    return out


def noise_variance(clean: np.ndarray, snr_db: Optional[float]) -> float:
    """sigma^2 = mean |r|^2 / SNR; zero for a noiseless (None or infinite) SNR."""
    if snr_db is None or np.isinf(snr_db):
        return 0.0
    return float(np.mean(np.abs(clean) ** 2) / 10 ** (snr_db / 10))


def apply_channel(
    samples: np.ndarray,
    channel: ChannelRealization,
    snr_db: Optional[float],
    sample_period: float,
    rng: Optional[np.random.Generator] = None,
    unit_noise: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Propagate and add complex white Gaussian noise at the requested SNR.

    ``unit_noise`` (unit-variance complex samples) lets callers reuse one noise
    draw across several SNR points.
    """
    s = np.asarray(samples)
    if s.size == 0:
        raise InvalidParameterError("transmit stream is empty", precondition="nonempty stream")
    clean = propagate(s, channel, sample_period)
    variance = noise_variance(clean, snr_db)
    if variance == 0.0:
        return clean
    if unit_noise is None:
        if rng is None:
            raise InvalidParameterError("a generator or a noise draw is required", precondition="noise source")
        unit_noise = unit_complex_noise(rng, s.size)
    return clean + np.sqrt(variance) * unit_noise[: s.size]


def unit_complex_noise(rng: np.random.Generator, size: int) -> np.ndarray:
    return (rng.standard_normal(size) + 1j * rng.standard_normal(size)) / np.sqrt(2)


def frame_operator(channel: ChannelRealization, body_start: int, frame_len: int, sample_period: float) -> np.ndarray:
    """
    Matrix H with y = H x for one CP-protected frame body starting at absolute
    index ``body_start``: delays wrap cyclically through the prefix and Doppler
    phases use the absolute sample index.
    """
    if channel.max_delay >= frame_len:
        raise InvalidParameterError(
            f"path delay {channel.max_delay} does not fit a frame of {frame_len} samples",
            precondition="max delay < frame length",
        )
    H = np.zeros((frame_len, frame_len), dtype=np.complex128)
    k = np.arange(frame_len)
    for path in channel.paths:
        d = path.delay_bins
        phase = np.exp(2j * np.pi * path.doppler_hz * (body_start + k - d) * sample_period)
        H[k, (k - d) % frame_len] += path.coeff * phase
    return H
