"""
Transmit-stream assembly and sliding-window preamble synchronisation.
"""
from typing import Optional, Tuple

import numpy as np
import structlog
from numpy.lib.stride_tricks import sliding_window_view

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError, InvalidParameterError
from app.models.otfs import OtfsConfig, TxStream
from app.models.sequence import ComplexSequence, ZakMatrix
from app.services.otfs_modem import add_cp, modulate, normalize_power, qpsk_modulate, random_qpsk_frame
from app.services.sequence_analysis import pccf

logger = structlog.get_logger()


def doppler_grid(cfg: OtfsConfig) -> np.ndarray:
    """2*ceil(nu_max / (1/(N T_s))) + 1 equally spaced hypotheses on [-nu_max, nu_max]."""
    nu_max = cfg.max_doppler
    if nu_max == 0:
        return np.zeros(1)
    resolution = 1.0 / (cfg.frame_len * cfg.sample_period)
    count = 2 * int(np.ceil(nu_max / resolution)) + 1
    return np.linspace(-nu_max, nu_max, count)


def random_qpsk_preamble(cfg: OtfsConfig, seed: int) -> ZakMatrix:
    """Delay-Doppler frame of random QPSK symbols, the comparison preamble."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0x5EED,)))
    bits = rng.integers(0, 2, size=2 * cfg.frame_len)
    X = qpsk_modulate(bits).reshape(cfg.L_delay_bins, cfg.T_doppler_bins)
    return ZakMatrix(X, label="random_qpsk")


def preamble_reference(preamble_zak: ZakMatrix, cfg: OtfsConfig) -> np.ndarray:
    """Unit-power time-domain body of the synchronisation frame."""
    if preamble_zak.shape != (cfg.L_delay_bins, cfg.T_doppler_bins):
        raise DimensionMismatchError(
            "preamble does not fit the delay-Doppler grid",
            expected=[cfg.L_delay_bins, cfg.T_doppler_bins],
            actual=list(preamble_zak.shape),
        )
    body, _ = normalize_power(modulate(preamble_zak.entries, cfg))
    return body


def is_perfect(reference: np.ndarray) -> bool:
    seq = ComplexSequence(reference)
    mags = pccf(seq, seq).magnitudes
    return bool(np.all(mags[1:] <= settings.ZERO_TOLERANCE * mags[0]))


def build_tx(
    preamble_zak: ZakMatrix,
    rng: np.random.Generator,
    cfg: OtfsConfig,
    truncation: Optional[int] = None,
    reference: Optional[np.ndarray] = None,
) -> TxStream:
    """
    Data | preamble | data, each frame CP-prefixed and at unit average power.

    The truncation is drawn uniformly from [0, cp_len] unless given, so the
    first data frame keeps its body. The generator is consumed in a fixed order:
    data bits of frame 0, data bits of frame 2, truncation.
    """
    if reference is None:
        ref = preamble_reference(preamble_zak, cfg)
        if not is_perfect(ref):
            logger.warning("Preamble is not a perfect sequence", label=preamble_zak.label)
    else:
        ref = reference
    bits0, X0 = random_qpsk_frame(rng, cfg)
    bits2, X2 = random_qpsk_frame(rng, cfg)
    drawn = int(rng.integers(0, cfg.cp_len + 1))
    truncation = drawn if truncation is None else int(truncation)
    if not 0 <= truncation < cfg.block_len:
        raise InvalidParameterError("truncation must stay inside the first frame", precondition="0 <= trunc < CP+N")

    bodies = [normalize_power(modulate(X0, cfg))[0], ref, normalize_power(modulate(X2, cfg))[0]]
    samples = np.concatenate([add_cp(b, cfg.cp_len) for b in bodies])
    starts = tuple(i * cfg.block_len for i in range(3))
    true_offset = cfg.block_len + cfg.cp_len - truncation
    return TxStream(
        samples=samples,
        frame_starts=starts,
        truncation=truncation,
        true_offset=true_offset,
        reference=ref,
        data_bits=(bits0, bits2),
        data_frames=(0, 2),
    )


def correlation_surface(
    received: np.ndarray,
    reference: np.ndarray,
    cfg: OtfsConfig,
    grid: np.ndarray,
    acquisition: Optional[Tuple[int, int]] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    |sum_n r(offset + n) conj(ref(n)) exp(-i2pi nu n T_s)| for every offset and
    Doppler hypothesis; returns (offsets, magnitudes[offset, nu]).
    """
    ref = np.asarray(reference)
    if ref.size != cfg.window_len:
        raise DimensionMismatchError("reference length differs from the window", expected=cfg.window_len,
                                     actual=ref.size)
    r = np.asarray(received)
    last = r.size - ref.size
    lo, hi = (0, last) if acquisition is None else acquisition
    if lo < 0 or hi > last or lo > hi:
        raise InvalidParameterError(
            f"acquisition range [{lo}, {hi}] exceeds the received stream", precondition="range inside stream"
        )
    windows = sliding_window_view(r, ref.size)[lo:hi + 1]
    n = np.arange(ref.size)
    templates = np.conj(ref)[:, None] * np.exp(-2j * np.pi * np.outer(n, grid) * cfg.sample_period)
    return np.arange(lo, hi + 1), np.abs(windows @ templates)


def first_arrival(per_offset: np.ndarray, search_back: int, fraction: float, floor: float = 0.0) -> int:
    """
    Index of the earliest metric within ``search_back`` positions before the
    global peak that reaches both ``fraction`` of the peak and ``floor``.

    The peak itself always qualifies. Ties of the peak go to the smallest index.
    """
    metric = np.asarray(per_offset)
    peak = int(np.argmax(metric))
    lo = max(0, peak - max(0, search_back))
    threshold = min(metric[peak], max(fraction * metric[peak], floor))
    above = np.flatnonzero(metric[lo:peak + 1] >= threshold)
    return lo + int(above[0])


def synchronize(
    received: np.ndarray,
    reference: np.ndarray,
    cfg: OtfsConfig,
    grid: Optional[np.ndarray] = None,
    acquisition: Optional[Tuple[int, int]] = None,
    noise_var: float = 0.0,
    fraction: Optional[float] = None,
) -> Tuple[int, float]:
    """
    Offset of the first channel arrival and the Doppler hypothesis of the main path.

    The global maximum over offsets and Doppler hypotheses (ties to the
    smallest offset) fixes the main path and its Doppler. That path may be a
    delayed one stronger than the first, so the detector then scans the
    Doppler-compensated metric back over the delay spread (C - 1 samples) and
    returns the earliest offset reaching ``fraction`` of the peak and
    ``SYNC_NOISE_THRESHOLD`` correlator noise deviations,
    sqrt(noise_var * ||reference||^2). ``fraction=1`` returns the global peak.
    """
    grid = doppler_grid(cfg) if grid is None else np.asarray(grid, dtype=float)
    fraction = settings.SYNC_FIRST_ARRIVAL_FRACTION if fraction is None else fraction
    if not 0 < fraction <= 1:
        raise InvalidParameterError("first-arrival fraction must lie in (0, 1]", precondition="0 < fraction <= 1")
    if noise_var < 0:
        raise InvalidParameterError("noise variance must be nonnegative", precondition="noise_var >= 0")
    offsets, mags = correlation_surface(received, reference, cfg, grid, acquisition)
    main = int(np.argmax(mags.max(axis=1)))
    hypothesis = int(np.argmax(mags[main]))
    floor = settings.SYNC_NOISE_THRESHOLD * np.sqrt(noise_var * float(np.sum(np.abs(reference) ** 2)))
    best = first_arrival(mags[:, hypothesis], cfg.C_paths - 1, fraction, floor)
    return int(offsets[best]), float(grid[hypothesis])
