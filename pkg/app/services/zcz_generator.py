"""
Zak-domain sequence-family generator and the admissibility checks on its
index and phase matrices.

A set is described by one index row A (a permutation of Z_T) and a T x RT
phase matrix P. Sequence u has Zak transform

    X_u(j, t) = T*sqrt(R) * P_u(t + rT)   if j = A(t) + rT, 0 <= r < R
              = 0                          otherwise

and its time-domain samples follow from the inverse transform.
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from sympy import isprime

from app.core.config import settings
from app.core.exceptions import InvalidParameterError
from app.core.metrics import families_generated
from app.models.family import (
    FamilyParams,
    IndexMatrix,
    IndexSource,
    PhaseMatrix,
    SequenceFamily,
    Theorem,
)
from app.models.florentine import CircularFlorentineArray, ExtensionPermutation
from app.models.sequence import ComplexSequence, ZakMatrix
from app.services import florentine
from app.services.phase_matrices import (
    phase_corollary1,
    phase_corollary2,
    phase_corollary3,
    phase_theorem1,
    phase_theorem2,
    phase_theorem3,
    smallest_prime_divisor,
)

logger = structlog.get_logger()

EXPONENT_DENOMINATOR_FACTOR = 8


def _check_index_row(A_row, T: int) -> np.ndarray:
    row = np.asarray(A_row, dtype=np.int64)
    if row.shape != (T,) or sorted(row.tolist()) != list(range(T)):
        raise InvalidParameterError(
            f"index row {row.tolist()} is not a permutation of Z_{T}", precondition="index row is a permutation"
        )
    return row


def _zak_entries(A_row, P: PhaseMatrix, R: int) -> np.ndarray:
    """(T, L, T) array: Zak matrices of all T sequences of one set."""
    T = len(A_row)
    P.check_block_shape(R, T)
    A = _check_index_row(A_row, T)
    values = P.values
    entries = np.zeros((values.shape[0], R * T, T), dtype=np.complex128)
    t = np.arange(T)
    scale = T * np.sqrt(R)
    for r in range(R):
        entries[:, A + r * T, t] = scale * values[:, t + r * T]
    return entries


def assemble_zak(A_row, P: PhaseMatrix, R: int) -> List[ZakMatrix]:
    """Zak matrix of each sequence u of the set selected by ``A_row``."""
    entries = _zak_entries(A_row, P, R)
    return [ZakMatrix(entries[u], label=f"u={u}") for u in range(entries.shape[0])]


def generate_set(A_row, P: PhaseMatrix, R: int, set_index: int = 0) -> List[ComplexSequence]:
    """
    Time-domain sequences of one set,
    s_u(t + lT) = R^{-1/2} sum_r P_u(t + rT) w_L^{l (A(t) + rT)}.
    """
    T = len(A_row)
    P.check_block_shape(R, T)
    A = _check_index_row(A_row, T)
    L = R * T
    blocks = P.values.reshape(P.shape[0], R, T)
    l = np.arange(L)[:, None, None]
    r = np.arange(R)[None, :, None]
    kernel_exps = np.mod(l * (A[None, None, :] + r * T), L)
    kernel = np.exp(2j * np.pi * kernel_exps / L)
    samples = np.einsum("urt,lrt->ult", blocks, kernel) / np.sqrt(R)
    return [
        ComplexSequence(samples[u].reshape(-1), label=f"s_{u}^{set_index}")
        for u in range(samples.shape[0])
    ]


def verify_lemma5(P: PhaseMatrix, R: int, T: int, tol: Optional[float] = None) -> bool:
    """Unimodularity: |sum_r P_u(t + rT) w_R^{lr}| == sqrt(R) for every u, t, l."""
    tol = settings.MAGNITUDE_TOLERANCE if tol is None else tol
    P.check_block_shape(R, T)
    blocks = P.values.reshape(T, R, T)
    lr = np.outer(np.arange(R), np.arange(R))
    sums = np.einsum("urt,lr->ult", blocks, np.exp(2j * np.pi * lr / R))
    return bool(np.all(np.abs(np.abs(sums) - np.sqrt(R)) <= tol))


def _lemma7_sums(A_row, P: PhaseMatrix, R: int, T: int) -> np.ndarray:
    """(R+1, T, T) array of sum_{r,t} w_L^{tau2 (A(t) + rT)} P_u P_v^* for tau2 = 0..R."""
    A = _check_index_row(A_row, T)
    P.check_block_shape(R, T)
    L = R * T
    values = P.values
    products = values[:, None, :] * np.conj(values[None, :, :])  # (u, v, column)
    columns = (A[None, :] + np.arange(R)[:, None] * T).reshape(-1)  # A(t) + rT at column rT + t
    tau2 = np.arange(R + 1)[:, None]
    kernel = np.exp(2j * np.pi * np.mod(tau2 * columns[None, :], L) / L)
    return np.einsum("kc,uvc->kuv", kernel, products)


def verify_lemma7(A_row, P: PhaseMatrix, R: int, T: int, tol: Optional[float] = None) -> bool:
    """
    Zero-correlation zone and cyclic distinctness within a set.

    For u != v the weighted sum vanishes for 0 <= tau2 < R and has magnitude
    strictly between 0 and RT at tau2 = R.
    """
    tol = settings.MAGNITUDE_TOLERANCE if tol is None else tol
    sums = np.abs(_lemma7_sums(A_row, P, R, T))
    off_diagonal = ~np.eye(T, dtype=bool)
    zone = sums[:R][:, off_diagonal]
    edge = sums[R][off_diagonal]
    return bool(np.all(zone <= tol) and np.all(edge > tol) and np.all(edge < R * T - tol))


def verify_lemma8(P_m1: PhaseMatrix, P_m2: PhaseMatrix, R: int, T: int, tol: Optional[float] = None) -> bool:
    """
    Inter-set condition: |sum_r P_u^{m1}(t + tau1 + rT) P_v^{m2*}(t + rT) w_R^{r tau2}| == sqrt(R)
    for all t, tau1, tau2 and all u, v. The shift t + tau1 wraps inside each block.
    """
    tol = settings.MAGNITUDE_TOLERANCE if tol is None else tol
    P_m1.check_block_shape(R, T)
    P_m2.check_block_shape(R, T)
    b1 = P_m1.values.reshape(T, R, T)
    b2 = np.conj(P_m2.values.reshape(T, R, T))
    twiddle = np.exp(2j * np.pi * np.outer(np.arange(R), np.arange(R)) / R)  # (tau2, r)
    for tau1 in range(T):
        shifted = np.roll(b1, -tau1, axis=2)
        sums = np.einsum("urt,vrt,kr->uvtk", shifted, b2, twiddle)
        if np.any(np.abs(np.abs(sums) - np.sqrt(R)) > tol):
            return False
    return True


def family_denominator(R: int, T: int) -> int:
    """Exponent denominator of generated sequences; a multiple of 2RT."""
    return EXPONENT_DENOMINATOR_FACTOR * R * T


def sequence_exponents(seq: ComplexSequence, denominator: int) -> np.ndarray:
    """
    Exponent form of a generated sequence over ``denominator``.

    Raises:
        InvalidParameterError: a sample is not a ``denominator``-th root of unity
    """
    return seq.to_exponents(denominator)


def sequence_from_exponents(exponents, denominator: int, label: str = "") -> ComplexSequence:
    """Inverse of ``sequence_exponents``; samples are evaluated from exact phases."""
    return ComplexSequence.from_exponents(exponents, denominator, label=label)


def _check_theorem_R(theorem: Theorem, R: int) -> None:
    if theorem in (Theorem.T1, Theorem.C1) and R != 1:
        raise InvalidParameterError(f"{theorem.value} requires R = 1", precondition="R = 1")
    if theorem in (Theorem.T2, Theorem.C2) and (R < 3 or R % 2 == 0):
        raise InvalidParameterError("R must be odd for Theorem 2", precondition="R odd >= 3")
    if theorem in (Theorem.T3, Theorem.C3) and (R < 2 or R % 2):
        raise InvalidParameterError("R must be even for Theorem 3", precondition="R even >= 2")


def florentine_capacity(T: int, budget: Optional[int] = None, limit: Optional[int] = None) -> int:
    """
    Largest row count available for order T, capped at ``limit``.

    Exact for prime and even T. Otherwise row counts above the guaranteed lower
    bound are tried in turn and the last one the search finds is returned.
    """
    lower, upper = florentine.capacity_bounds(T)
    if limit is not None:
        if limit <= lower:
            return limit
        upper = min(upper, limit)
    if lower == upper:
        return lower
    best = lower
    for rows in range(lower + 1, upper + 1):
        if not florentine.search_small(T, rows, budget=budget).found:
            break
        best = rows
    return best


def max_set_count(theorem: Theorem, R: int, T: int, budget: Optional[int] = None) -> int:
    theorem = Theorem(theorem)
    _check_theorem_R(theorem, R)
    if theorem in (Theorem.T3, Theorem.C3):
        return 1
    if theorem in (Theorem.T1, Theorem.C1):
        return florentine_capacity(T, budget)
    return florentine_capacity(T, budget, limit=smallest_prime_divisor(R) - 1)


def _source_array(T: int, rows_needed: int, budget: Optional[int]) -> Tuple[CircularFlorentineArray, IndexSource]:
    if isprime(T):
        return florentine.base_array_prime(T), IndexSource.BASE
    outcome = florentine.search_small(T, rows_needed, budget=budget)
    if not outcome.found:
        raise InvalidParameterError(
            f"no {rows_needed} x {T} circular Florentine array available",
            precondition="M <= available Florentine rows",
            details={"budget_exhausted": outcome.budget_exhausted},
        )
    return outcome.array, IndexSource.SEARCH


def _default_set_count(theorem: Theorem, R: int, T: int, budget: Optional[int]) -> int:
    if theorem in (Theorem.T3, Theorem.C3):
        return 1
    return max_set_count(theorem, R, T, budget)


def _build_index(
    theorem: Theorem,
    T: int,
    R: int,
    q: Optional[int],
    row_selection: Optional[Sequence[int]],
    budget: Optional[int],
) -> Tuple[IndexMatrix, List[int], int]:
    if theorem.is_corollary:
        if q not in (None, 0):
            raise InvalidParameterError(
                f"{theorem.value} uses the base array, q must be 0", precondition="q = 0 for corollaries"
            )
        q = 0
    elif q is None:
        q = 1

    if row_selection is None:
        selection = list(range(_default_set_count(theorem, R, T, budget)))
    else:
        selection = [int(i) for i in row_selection]
    if not selection or min(selection) < 0:
        raise InvalidParameterError("row selection must be nonempty and nonnegative", precondition="row selection")

    array, source = _source_array(T, max(selection) + 1, budget)
    if q:
        array = florentine.extend_construction1(array, ExtensionPermutation.from_index(T, q))
        source = IndexSource.EXTENDED
    if max(selection) >= array.row_count:
        raise InvalidParameterError(
            f"row {max(selection)} not available, the index array has {array.row_count} rows",
            precondition="M <= available Florentine rows",
        )
    return IndexMatrix(array.rows[selection], source=source, q=q), selection, q


def _phase_matrices(theorem: Theorem, R: int, T: int, M: int) -> List[PhaseMatrix]:
    """One phase matrix per set; T1/C1 and T3/C3 share theirs across sets."""
    if theorem in (Theorem.T2, Theorem.C2):
        build = phase_theorem2 if theorem is Theorem.T2 else phase_corollary2
        return [build(R, T, m) for m in range(M)]
    if theorem is Theorem.T1:
        shared = phase_theorem1(T)
    elif theorem is Theorem.C1:
        shared = phase_corollary1(T)
    elif theorem is Theorem.T3:
        shared = phase_theorem3(R, T)
    else:
        shared = phase_corollary3(R, T)
    return [PhaseMatrix(shared.exponents, shared.denominator, m) for m in range(M)]


def generate_family(
    theorem: Theorem,
    R: int,
    T: int,
    q: Optional[int] = None,
    row_selection: Optional[Sequence[int]] = None,
    index_rows: Optional[Sequence[Sequence[int]]] = None,
    budget: Optional[int] = None,
) -> SequenceFamily:
    """
    Generate a family with one of the six constructions.

    Args:
        theorem: construction id (T1, C1, T2, C2, T3, C3)
        R: block count, 1 for T1/C1, odd for T2/C2, even for T3/C3
        T: set size, T > 3
        q: Construction-I extension index for T1/T2/T3 (default 1); corollaries use the base array
        row_selection: rows of the index array to use (default: the first M)
        index_rows: explicit index matrix, overrides the Florentine array and q
        budget: node budget for the Florentine search when T is not prime

    Raises:
        InvalidParameterError: incompatible (theorem, R), T <= 3, or more sets than available rows
    """
    theorem = Theorem(theorem)
    if T <= 3:
        raise InvalidParameterError(f"T={T} is too small, constructions need T > 3", precondition="T > 3")
    _check_theorem_R(theorem, R)

    if index_rows is not None:
        index = IndexMatrix(index_rows, source=IndexSource.USER)
        if index.symbol_count != T:
            raise InvalidParameterError("index rows must have T symbols", precondition="index row length T")
        selection = list(range(index.row_count))
        q = None
    else:
        index, selection, q = _build_index(theorem, T, R, q, row_selection, budget)

    if len(set(selection)) != len(selection):
        raise InvalidParameterError("row selection has duplicates", precondition="distinct rows")
    M = index.row_count
    if theorem in (Theorem.T3, Theorem.C3):
        limit = 1
    elif theorem in (Theorem.T2, Theorem.C2):
        limit = smallest_prime_divisor(R) - 1
    else:
        limit = T - 1
    if M > limit:
        raise InvalidParameterError(
            f"{theorem.value} allows at most {limit} sets, {M} requested", precondition="M within theorem bound"
        )
    if M > 1:
        florentine.require_valid(CircularFlorentineArray(index.rows))

    phases = _phase_matrices(theorem, R, T, M)
    sets = tuple(tuple(generate_set(index.row(m), phases[m], R, set_index=m)) for m in range(M))
    params = FamilyParams(
        theorem=theorem,
        R=R,
        T=T,
        L=R * T,
        N=R * T * T,
        M=M,
        q=q,
        rows=selection,
        index_source=index.source,
    )
    families_generated.labels(theorem=theorem.value).inc()
    logger.info("Family generated", theorem=theorem.value, R=R, T=T, M=M, q=q, rows=selection)
    return SequenceFamily(sets=sets, params=params, index_matrix=index, phase_matrices=tuple(phases))


def family_lemma_report(family: SequenceFamily) -> dict:
    """Index and phase admissibility verdicts of a generated family, keyed by condition."""
    if family.index_matrix is None or not family.phase_matrices:
        raise InvalidParameterError(
            "family carries no index or phase matrices", precondition="generated family"
        )
    R, T = family.params.R, family.params.T
    phases = family.phase_matrices
    unimodular = all(verify_lemma5(P, R, T) for P in phases)
    zone = all(verify_lemma7(family.index_matrix.row(m), phases[m], R, T) for m in range(family.set_count))
    inter = all(
        verify_lemma8(phases[m1], phases[m2], R, T)
        for m1 in range(family.set_count)
        for m2 in range(family.set_count)
        if m1 != m2
    )
    return {"unimodular": unimodular, "zero_zone": zone, "inter_set": inter}
