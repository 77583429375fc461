"""
Monte Carlo synchronisation and BER campaigns.

Every trial draws from its own substream SeedSequence(master_seed,
spawn_key=(trial,)), consumed in a fixed order: data bits, truncation,
channel, noise. Campaigns run with different preambles therefore see the
same channels, truncations and noise, and results do not depend on how
trials are spread over worker processes.
"""
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy import linalg
from scipy.stats import binomtest

from app.core.decorators import log_duration
from app.core.exceptions import DimensionMismatchError, InvalidParameterError
from app.core.metrics import simulated_trials
from app.models.family import Theorem
from app.models.otfs import (
    CampaignConfig,
    ChannelRealization,
    OtfsConfig,
    PreambleKind,
    PreambleSelector,
    SimMode,
    SimPoint,
    SyncTrialResult,
    TxStream,
)
from app.models.sequence import ComplexSequence, ZakMatrix
from app.schemas.sequence_file import load_family
from app.services.otfs_channel import apply_channel, frame_operator, gen_channel, noise_variance, propagate, \
    unit_complex_noise
from app.services.otfs_modem import demodulate, qpsk_demodulate
from app.services.otfs_sync import build_tx, doppler_grid, is_perfect, preamble_reference, random_qpsk_preamble, \
    synchronize
from app.services.zak_transform import fzt
from app.services.zcz_generator import generate_family

logger = structlog.get_logger()

CONFIDENCE_LEVEL = 0.95


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial,)))


def wilson_interval(successes: int, trials: int) -> Tuple[float, float]:
    ci = binomtest(successes, trials).proportion_ci(confidence_level=CONFIDENCE_LEVEL, method="wilson")
    return float(ci.low), float(ci.high)


def sequence_preamble(seq: ComplexSequence, cfg: OtfsConfig) -> ZakMatrix:
    """Delay-Doppler frame whose OTFS modulation is ``seq`` up to scale."""
    if seq.period != cfg.frame_len:
        raise DimensionMismatchError(
            "preamble period differs from the frame length", expected=cfg.frame_len, actual=seq.period
        )
    return fzt(seq, cfg.L_delay_bins, cfg.T_doppler_bins)


def resolve_preamble(selector: PreambleSelector, cfg: OtfsConfig, master_seed: int) -> ZakMatrix:
    """Build the synchronisation frame named by ``selector``."""
    if selector.kind is PreambleKind.RANDOM_QPSK:
        return random_qpsk_preamble(cfg, master_seed)
    if selector.kind is PreambleKind.FILE:
        family = load_family(selector.path)
    else:
        family = generate_family(
            Theorem(selector.theorem),
            selector.R,
            selector.T,
            q=selector.q,
            index_rows=selector.index_rows,
        )
    seq = family.sequence(selector.m, selector.u)
    X = sequence_preamble(seq, cfg)
    return ZakMatrix(X.entries, label=selector.kind.value)


def _extract(samples: np.ndarray, start: int, length: int) -> np.ndarray:
    """samples[start:start+length], zero outside the stream."""
    out = np.zeros(length, dtype=np.complex128)
    lo, hi = max(start, 0), min(start + length, samples.size)
    if lo < hi:
        out[lo - start:hi - start] = samples[lo:hi]
    return out


def lmmse_equalize(H: np.ndarray, y: np.ndarray, noise_var: float) -> np.ndarray:
    """(H^H H + sigma^2 I)^{-1} H^H y for unit-power transmit samples; least squares when noiseless."""
    if noise_var == 0.0:
        return linalg.lstsq(H, y)[0]
    Hh = H.conj().T
    return linalg.solve(Hh @ H + noise_var * np.eye(H.shape[1]), Hh @ y, assume_a="pos")


def frame_bit_errors(
    received: np.ndarray,
    tx: TxStream,
    frame: int,
    body_start: int,
    channel: ChannelRealization,
    noise_var: float,
    cfg: OtfsConfig,
) -> int:
    """
    Bit errors of data frame ``frame`` demodulated with its body assumed at
    ``body_start`` of the truncated ``received`` stream.

    The equalizer knows the channel exactly; its Doppler phases are referred to
    the assumed position, so a wrong position garbles the frame.
    """
    if frame not in tx.data_frames:
        raise InvalidParameterError(f"frame {frame} carries no data", precondition="data frame index")
    y = _extract(received, body_start, cfg.frame_len)
    H = frame_operator(channel, body_start + tx.truncation, cfg.frame_len, cfg.sample_period)
    x_hat = lmmse_equalize(H, y, noise_var)
    bits = qpsk_demodulate(demodulate(x_hat, cfg))
    sent = tx.data_bits[tx.data_frames.index(frame)]
    return int(np.count_nonzero(bits != sent))


def _data_body_starts(preamble_offset: int, cfg: OtfsConfig) -> Dict[int, int]:
    return {0: preamble_offset - cfg.block_len, 2: preamble_offset + cfg.block_len}


def run_trial(
    trial: int,
    cfg: OtfsConfig,
    preamble_zak: ZakMatrix,
    reference: np.ndarray,
    snr_list: Sequence[Optional[float]],
    master_seed: int,
    grid: np.ndarray,
    channel: Optional[ChannelRealization] = None,
    measure_ber: bool = False,
) -> List[dict]:
    """
    One transmission observed at every SNR in ``snr_list``.

    Returns one record per SNR with the sync result and, when ``measure_ber``
    is set, the bit errors at the detected and at the true offset.
    """
    rng = trial_rng(master_seed, trial)
    tx = build_tx(preamble_zak, rng, cfg, reference=reference)
    ch = gen_channel(cfg, rng) if channel is None else channel
    unit_noise = unit_complex_noise(rng, tx.samples.size)
    clean = propagate(tx.samples, ch, cfg.sample_period)

    records = []
    for snr_db in snr_list:
        received = tx.truncate(
            apply_channel(tx.samples, ch, snr_db, cfg.sample_period, unit_noise=unit_noise)
        )
        noise_var = noise_variance(clean, snr_db)
        detected, nu = synchronize(received, reference, cfg, grid, noise_var=noise_var)
        result = SyncTrialResult(
            true_offset=tx.true_offset,
            detected_offset=detected,
            success=detected == tx.true_offset,
            snr_db=snr_db,
            seed=trial,
            peak_doppler_hz=nu,
        )
        record = {"result": result}
        if measure_ber:
            for key, offset in (("errors", detected), ("errors_perfect", tx.true_offset)):
                record[key] = sum(
                    frame_bit_errors(received, tx, frame, start, ch, noise_var, cfg)
                    for frame, start in _data_body_starts(offset, cfg).items()
                )
            record["bits"] = sum(b.size for b in tx.data_bits)
        logger.debug("Trial finished", trial=trial, snr_db=snr_db, success=result.success,
                     detected=detected, true_offset=tx.true_offset)
        records.append(record)
    return records


def _map_trials(worker: Callable[[int], List[dict]], trials: int, workers: int) -> List[List[dict]]:
    if workers <= 1:
        return [worker(i) for i in range(trials)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(worker, range(trials), chunksize=max(1, trials // (4 * workers))))


def _campaign(
    mode: SimMode,
    cfg: OtfsConfig,
    preamble_zak: ZakMatrix,
    snr_list: Sequence[Optional[float]],
    trials: int,
    master_seed: int,
    workers: int,
    channel: Optional[ChannelRealization],
    measure_ber: bool,
) -> List[SimPoint]:
    if trials < 1:
        raise InvalidParameterError("trials must be at least 1", precondition="trials >= 1")
    reference = preamble_reference(preamble_zak, cfg)
    if not is_perfect(reference):
        logger.warning("Preamble is not a perfect sequence", label=preamble_zak.label)
    grid = doppler_grid(cfg)
    worker = partial(
        run_trial,
        cfg=cfg,
        preamble_zak=preamble_zak,
        reference=reference,
        snr_list=list(snr_list),
        master_seed=master_seed,
        grid=grid,
        channel=channel,
        measure_ber=measure_ber,
    )
    per_trial = _map_trials(worker, trials, workers)
    simulated_trials.labels(mode=mode.value, preamble=preamble_zak.label or "custom").inc(trials)

    points = []
    for i, snr_db in enumerate(snr_list):
        column = [records[i] for records in per_trial]
        successes = sum(r["result"].success for r in column)
        low, high = wilson_interval(successes, trials)
        point = SimPoint(
            preamble=preamble_zak.label or "custom",
            snr_db=float("inf") if snr_db is None else float(snr_db),
            v_max=cfg.v_max,
            trials=trials,
            successes=successes,
            success_prob=successes / trials,
            ci_low=low,
            ci_high=high,
        )
        if measure_ber:
            bits = sum(r["bits"] for r in column)
            point.ber = sum(r["errors"] for r in column) / bits
            point.ber_perfect_sync = sum(r["errors_perfect"] for r in column) / bits
        logger.info("SNR point finished", preamble=point.preamble, snr_db=point.snr_db,
                    success_prob=point.success_prob, ber=point.ber)
        points.append(point)
    return points


@log_duration("otfs_sync_campaign")
def monte_carlo_sync(
    cfg: OtfsConfig,
    preamble_zak: ZakMatrix,
    snr_list: Sequence[Optional[float]],
    trials: int,
    master_seed: int,
    workers: int = 1,
    channel: Optional[ChannelRealization] = None,
) -> List[SimPoint]:
    """
    Synchronisation success probability per SNR with Wilson intervals.

    ``channel`` fixes the channel for every trial instead of drawing one; an
    SNR of None means no noise.
    """
    return _campaign(SimMode.SYNC, cfg, preamble_zak, snr_list, trials, master_seed, workers, channel, False)


@log_duration("otfs_ber_campaign")
def ber_after_sync(
    cfg: OtfsConfig,
    preamble_zak: ZakMatrix,
    snr_list: Sequence[Optional[float]],
    trials: int,
    master_seed: int,
    workers: int = 1,
    channel: Optional[ChannelRealization] = None,
) -> List[SimPoint]:
    """BER of both data frames at the detected offset, and at the true offset for reference."""
    return _campaign(SimMode.BER, cfg, preamble_zak, snr_list, trials, master_seed, workers, channel, True)


@log_duration("otfs_velocity_sweep")
def velocity_sweep(
    cfg: OtfsConfig,
    preamble_zak: ZakMatrix,
    velocities: Sequence[float],
    snr_db: float,
    trials: int,
    master_seed: int,
    workers: int = 1,
) -> List[SimPoint]:
    """Success probability against maximum velocity at one SNR."""
    points = []
    for v in velocities:
        cfg_v = cfg.model_copy(update={"v_max": float(v)})
        points.extend(
            _campaign(SimMode.VELOCITY_SWEEP, cfg_v, preamble_zak, [snr_db], trials, master_seed, workers,
                      None, False)
        )
    return points


def run_campaign(campaign: CampaignConfig) -> List[SimPoint]:
    """Run ``campaign`` for its preamble and, if requested, the random-QPSK baseline."""
    preambles = [resolve_preamble(campaign.preamble, campaign.otfs, campaign.master_seed)]
    if campaign.compare_random and campaign.preamble.kind is not PreambleKind.RANDOM_QPSK:
        preambles.append(random_qpsk_preamble(campaign.otfs, campaign.master_seed))

    logger.info("Campaign started", mode=campaign.mode.value, trials=campaign.trials,
                preambles=[p.label for p in preambles], master_seed=campaign.master_seed)
    points: List[SimPoint] = []
    for preamble in preambles:
        if campaign.mode is SimMode.SYNC:
            points.extend(monte_carlo_sync(campaign.otfs, preamble, campaign.snr_list, campaign.trials,
                                           campaign.master_seed, campaign.workers))
        elif campaign.mode is SimMode.BER:
            points.extend(ber_after_sync(campaign.otfs, preamble, campaign.snr_list, campaign.trials,
                                         campaign.master_seed, campaign.workers))
        else:
            points.extend(velocity_sweep(campaign.otfs, preamble, campaign.velocities, campaign.sweep_snr_db,
                                         campaign.trials, campaign.master_seed, campaign.workers))
    return points
