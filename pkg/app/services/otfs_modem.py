"""
OTFS modulation: ISFFT, Heisenberg transform, their inverses, QPSK mapping and
cyclic-prefix framing.

Delay-Doppler frames are L x T arrays in the Zak layout (row j, column t), so
heisenberg(isfft(X)) equals sqrt(L) * ifzt(X).
"""
from typing import Optional, Tuple

import numpy as np

from app.core.exceptions import DimensionMismatchError
from app.models.otfs import OtfsConfig


def _check_frame(X: np.ndarray, cfg: Optional[OtfsConfig]) -> np.ndarray:
    X = np.asarray(X, dtype=np.complex128)
    if X.ndim != 2:
        raise DimensionMismatchError("frame must be a 2-D L x T array", actual=list(X.shape))
    if cfg is not None and X.shape != (cfg.L_delay_bins, cfg.T_doppler_bins):
        raise DimensionMismatchError(
            "frame shape does not match the configuration",
            expected=[cfg.L_delay_bins, cfg.T_doppler_bins],
            actual=list(X.shape),
        )
    return X


def isfft(X_dd: np.ndarray, cfg: Optional[OtfsConfig] = None) -> np.ndarray:
    """X_TF(l, m) = (LT)^{-1/2} sum_j sum_t X(j, t) exp(i2pi(lj/L - mt/T))."""
    X = _check_frame(X_dd, cfg)
    return np.fft.fft(np.fft.ifft(X, axis=0, norm="ortho"), axis=1, norm="ortho")


def sfft(X_tf: np.ndarray, cfg: Optional[OtfsConfig] = None) -> np.ndarray:
    X = _check_frame(X_tf, cfg)
    return np.fft.fft(np.fft.ifft(X, axis=1, norm="ortho"), axis=0, norm="ortho")


def heisenberg(X_tf: np.ndarray, cfg: Optional[OtfsConfig] = None) -> np.ndarray:
    """s(t + lT) = T^{-1/2} sum_m X_TF(l, m) exp(i2pi m t / T)."""
    X = _check_frame(X_tf, cfg)
    return np.fft.ifft(X, axis=1, norm="ortho").reshape(-1)


def wigner(samples: np.ndarray, cfg: OtfsConfig) -> np.ndarray:
    x = np.asarray(samples, dtype=np.complex128)
    if x.size != cfg.frame_len:
        raise DimensionMismatchError("frame body length differs from L*T", expected=cfg.frame_len, actual=x.size)
    return np.fft.fft(x.reshape(cfg.L_delay_bins, cfg.T_doppler_bins), axis=1, norm="ortho")


def modulate(X_dd: np.ndarray, cfg: OtfsConfig) -> np.ndarray:
    return heisenberg(isfft(X_dd, cfg), cfg)


def demodulate(samples: np.ndarray, cfg: OtfsConfig) -> np.ndarray:
    return sfft(wigner(samples, cfg), cfg)


def normalize_power(samples: np.ndarray) -> Tuple[np.ndarray, float]:
    """Scale to unit average power; returns the samples and the applied gain."""
    power = float(np.mean(np.abs(samples) ** 2))
    gain = 1.0 / np.sqrt(power) if power > 0 else 1.0
    return samples * gain, gain


def add_cp(body: np.ndarray, cp_len: int) -> np.ndarray:
    if cp_len == 0:
        return np.asarray(body)
    return np.concatenate([body[-cp_len:], body])


def qpsk_modulate(bits: np.ndarray) -> np.ndarray:
    """Gray mapping (b0, b1) -> ((1 - 2 b0) + i (1 - 2 b1)) / sqrt(2)."""
    b = np.asarray(bits, dtype=np.int64).reshape(-1, 2)
    return ((1 - 2 * b[:, 0]) + 1j * (1 - 2 * b[:, 1])) / np.sqrt(2)


def qpsk_demodulate(symbols: np.ndarray) -> np.ndarray:
    s = np.asarray(symbols).reshape(-1)
    bits = np.empty((s.size, 2), dtype=np.int64)
    bits[:, 0] = s.real < 0
    bits[:, 1] = s.imag < 0
    return bits.reshape(-1)


def random_qpsk_frame(rng: np.random.Generator, cfg: OtfsConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Random bits and the L x T delay-Doppler QPSK frame carrying them."""
    bits = rng.integers(0, 2, size=2 * cfg.frame_len)
    return bits, qpsk_modulate(bits).reshape(cfg.L_delay_bins, cfg.T_doppler_bins)
