"""
Correlation analysis and certification of sequence sets.
"""
from math import gcd, sqrt
from typing import Iterable, List, Optional, Sequence

import numpy as np
import structlog

from app.core.config import settings
from app.core.exceptions import DimensionMismatchError, InvalidParameterError
from app.core.metrics import verification_verdicts
from app.models.analysis import (
    AmbiguityMap,
    CorrelationProfile,
    FamilyCertificate,
    InterSetReport,
    ParameterSummary,
    ProfileKind,
    ZakSupport,
    ZczCertificate,
)
from app.models.family import SequenceFamily
from app.models.sequence import ComplexSequence
from app.services.florentine import extension_count
from app.services.zak_transform import fzt
from app.services.zcz_generator import family_denominator, family_lemma_report

logger = structlog.get_logger()


def _zero_threshold(N: int) -> float:
    return settings.ZERO_TOLERANCE * N


def _check_periods(sequences: Sequence[ComplexSequence]) -> int:
    periods = {s.period for s in sequences}
    if len(periods) != 1:
        raise DimensionMismatchError("sequences must share one period", actual=sorted(periods))
    return periods.pop()


def pccf(s0: ComplexSequence, s1: ComplexSequence) -> CorrelationProfile:
    """values[tau] = sum_n s0((n + tau) mod N) * conj(s1(n))."""
    _check_periods([s0, s1])
    values = np.fft.ifft(np.fft.fft(s0.samples) * np.conj(np.fft.fft(s1.samples)))
    kind = ProfileKind.AUTO if s0 is s1 or np.array_equal(s0.samples, s1.samples) else ProfileKind.CROSS
    return CorrelationProfile(values=values, kind=kind)


def _all_profiles(sequences: Sequence[ComplexSequence]) -> np.ndarray:
    """(K, K, N) array; entry [a, b] is pccf(seq_a, seq_b)."""
    stack = np.fft.fft(np.stack([s.samples for s in sequences]), axis=1)
    return np.fft.ifft(stack[:, None, :] * np.conj(stack[None, :, :]), axis=2)


def _first_above(mags: np.ndarray, threshold: float, start: int) -> int:
    hits = np.flatnonzero(mags[start:] > threshold)
    return int(hits[0]) + start if hits.size else mags.size


def zcz_width(sequences: Sequence[ComplexSequence]) -> int:
    """
    Largest Z with every autocorrelation zero for 0 < tau < Z and every
    cross-correlation zero for 0 <= tau < Z.
    """
    if not sequences:
        raise InvalidParameterError("empty sequence set", precondition="nonempty set")
    N = _check_periods(sequences)
    threshold = _zero_threshold(N)
    mags = np.abs(_all_profiles(sequences))
    width = N
    K = len(sequences)
    for a in range(K):
        for b in range(K):
            start = 1 if a == b else 0
            width = min(width, _first_above(mags[a, b], threshold, start))
    return width


def sarwate_lhs(theta_a: float, theta_c: float, N: int, T: int) -> float:
    """theta_c^2/N + (N-1)/(N(T-1)) * theta_a^2/N; the bound is met with equality at 1."""
    if N <= 1:
        raise InvalidParameterError("N must exceed 1", precondition="N > 1")
    if T <= 1:
        raise InvalidParameterError("T must exceed 1", precondition="T > 1")
    return theta_c ** 2 / N + (N - 1) / (N * (T - 1)) * theta_a ** 2 / N


def cyclically_distinct(s0: ComplexSequence, s1: ComplexSequence, tol: Optional[float] = None) -> bool:
    """False when some cyclic shift and unit constant map s1 onto s0."""
    N = _check_periods([s0, s1])
    tol = _zero_threshold(N) if tol is None else tol
    peak = float(np.max(pccf(s0, s1).magnitudes))
    return not abs(peak - sqrt(s0.energy() * s1.energy())) <= tol


def distinctness_matrix(sequences: Sequence[ComplexSequence]) -> List[List[bool]]:
    K = len(sequences)
    return [[a == b or cyclically_distinct(sequences[a], sequences[b]) for b in range(K)] for a in range(K)]


def certify_set(sequences: Sequence[ComplexSequence]) -> ZczCertificate:
    N = _check_periods(sequences)
    threshold = _zero_threshold(N)
    mags = np.abs(_all_profiles(sequences))
    K = len(sequences)
    diag = np.arange(K)
    theta_a = float(np.max(mags[diag, diag, 1:])) if N > 1 else 0.0
    off = ~np.eye(K, dtype=bool)
    theta_c = float(np.max(mags[off])) if K > 1 else 0.0
    width = zcz_width(sequences)
    return ZczCertificate(
        N=N,
        set_size=K,
        zcz_width=width,
        tfm_optimal=K * width == N,
        theta_a=theta_a,
        theta_c=theta_c,
        perfect=theta_a <= threshold,
        unimodular=all(s.is_unimodular(settings.MAGNITUDE_TOLERANCE) for s in sequences),
    )


def inter_set_theta(family: SequenceFamily) -> InterSetReport:
    """Maximum cross-correlation magnitude between sequences of different sets."""
    if family.set_count < 2:
        return InterSetReport(applicable=False)
    N = family.params.N
    overall_max, overall_min = 0.0, float("inf")
    per_pair = {}
    for m1 in range(family.set_count):
        for m2 in range(m1 + 1, family.set_count):
            a = np.fft.fft(np.stack([s.samples for s in family.sets[m1]]), axis=1)
            b = np.fft.fft(np.stack([s.samples for s in family.sets[m2]]), axis=1)
            mags = np.abs(np.fft.ifft(a[:, None, :] * np.conj(b[None, :, :]), axis=2))
            per_pair[f"{m1}-{m2}"] = float(mags.max())
            overall_max = max(overall_max, float(mags.max()))
            overall_min = min(overall_min, float(mags.min()))
    return InterSetReport(
        applicable=True,
        theta_c=overall_max,
        min_magnitude=overall_min,
        constant_over_shift=overall_max - overall_min <= _zero_threshold(N),
        per_pair=per_pair,
    )


def _expected_values(family: SequenceFamily):
    p = family.params
    if p.theorem is None:
        return None, None
    theta = sqrt(p.R) * p.T if family.set_count > 1 else None
    return p.R * p.T, theta


def certify_family(family: SequenceFamily) -> FamilyCertificate:
    """
    Certify every property a construction promises.

    The verdict always requires perfect autocorrelation, an optimal ZCZ and
    within-set cyclic distinctness. Families with a known construction also
    need Z == RT and, when M > 1, a constant inter-set magnitude sqrt(R)*T
    meeting the Sarwate bound.
    """
    p = family.params
    tol = _zero_threshold(p.N)
    certificates = [certify_set(s) for s in family.sets]
    inter = inter_set_theta(family)
    distinct = [distinctness_matrix(s) for s in family.sets]
    expected_width, expected_theta = _expected_values(family)

    failures: List[str] = []
    for m, cert in enumerate(certificates):
        if not cert.perfect:
            failures.append(f"set {m}: autocorrelation sidelobe {cert.theta_a:.3g}")
        if not cert.tfm_optimal:
            failures.append(f"set {m}: ZCZ width {cert.zcz_width} is not optimal")
        if expected_width is not None and cert.zcz_width != expected_width:
            failures.append(f"set {m}: ZCZ width {cert.zcz_width}, expected {expected_width}")
        if not all(all(row) for row in distinct[m]):
            failures.append(f"set {m}: cyclically equivalent sequences")

    lhs = None
    if inter.applicable:
        theta_a = max(c.theta_a for c in certificates)
        lhs = sarwate_lhs(theta_a, inter.theta_c, p.N, p.T)
        if expected_theta is not None:
            if abs(inter.theta_c - expected_theta) > tol or not inter.constant_over_shift:
                failures.append(f"inter-set magnitude {inter.theta_c:.6g}, expected constant {expected_theta:.6g}")
            if abs(lhs - 1.0) > settings.MAGNITUDE_TOLERANCE:
                failures.append(f"Sarwate left-hand side {lhs:.6g} differs from 1")

    lemmas = None
    if family.index_matrix is not None and family.phase_matrices:
        lemmas = family_lemma_report(family)
        failures.extend(f"admissibility condition '{name}' fails" for name, ok in lemmas.items() if not ok)

    all_hold = not failures
    verification_verdicts.labels(outcome="pass" if all_hold else "fail").inc()
    logger.info("Family certified", theorem=p.theorem.value if p.theorem else None, all_hold=all_hold,
                failures=len(failures))
    return FamilyCertificate(
        sets=certificates,
        inter_set=inter,
        sarwate_lhs=lhs,
        distinct=distinct,
        lemma_conditions=lemmas,
        expected_zcz_width=expected_width,
        expected_theta_c=expected_theta,
        all_hold=all_hold,
        failures=failures,
    )


def alphabet_size(family: SequenceFamily) -> Optional[int]:
    """Order of the smallest root-of-unity alphabet holding every sample, None if there is none."""
    D = family_denominator(family.params.R, family.params.T)
    g = D
    try:
        for seq in family.all_sequences():
            for k in np.unique(seq.to_exponents(D)):
                g = gcd(g, int(k))
    except InvalidParameterError:
        return None
    return D // g


def parameter_summary(family: SequenceFamily) -> ParameterSummary:
    inter = inter_set_theta(family)
    distinct = all(all(all(row) for row in distinctness_matrix(s)) for s in family.sets)
    return ParameterSummary(
        theorem=family.params.theorem.value if family.params.theorem else None,
        period=family.params.N,
        alphabet_size=alphabet_size(family),
        set_size=family.params.T,
        zcz_width=min(zcz_width(s) for s in family.sets),
        set_count=family.set_count,
        theta_c=inter.theta_c,
        cyclically_distinct=distinct,
        available_families=extension_count(family.params.T),
    )


def zak_support(seq: ComplexSequence, L: int, T: int, tol: float = 1e-9) -> ZakSupport:
    """Positions and magnitudes of the nonzero Zak entries of ``seq``."""
    X = fzt(seq, L, T)
    positions = X.support(tol)
    mags = np.abs(X.entries[positions[:, 0], positions[:, 1]]) if positions.size else np.array([])
    return ZakSupport(positions=positions.tolist(), magnitudes=[float(m) for m in mags], count=len(positions))


def centred_shifts(N: int) -> np.ndarray:
    """Shift grid -floor(N/2) .. N - floor(N/2) - 1, the fftshift ordering of [0, N)."""
    return np.arange(-(N // 2), N - N // 2)


def ambiguity(
    s: ComplexSequence,
    doppler_range: Optional[Iterable[int]] = None,
    delay_range: Optional[Iterable[int]] = None,
) -> AmbiguityMap:
    """
    Periodic ambiguity AF(tau, v) = sum_n s((n + tau) mod N) conj(s(n)) w_N^{vn}.

    Shifts may be negative; both axes default to [0, N).
    """
    N = s.period
    delays = np.arange(N) if delay_range is None else np.asarray(list(delay_range), dtype=np.int64)
    dopplers = np.arange(N) if doppler_range is None else np.asarray(list(doppler_range), dtype=np.int64)
    for name, grid in (("delay", delays), ("doppler", dopplers)):
        if grid.size and (grid.min() <= -N or grid.max() >= N):
            raise InvalidParameterError(f"{name} shifts must lie in (-N, N)", precondition="-N < shift < N")
    n = np.arange(N)
    lagged = s.samples[(n[None, :] + delays[:, None]) % N] * np.conj(s.samples)[None, :]
    spectrum = np.fft.ifft(lagged, axis=1) * N  # column v: sum_n p(n) w_N^{vn}
    values = spectrum[:, dopplers % N]
    return AmbiguityMap(values=values, delays=delays, dopplers=dopplers, source=s.label)
