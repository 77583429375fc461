"""
Phase-matrix generators for the six constructions.

Every generator returns exact integer exponents over a common denominator:
T for the R = 1 constructions, RT for the odd-R ones and 2RT for the even-R
ones.
"""
import numpy as np
from sympy import primefactors

from app.core.exceptions import InvalidParameterError
from app.models.family import PhaseMatrix


def _check_T(T: int) -> None:
    if T <= 3:
        raise InvalidParameterError(f"T={T} is too small, constructions need T > 3", precondition="T > 3")


def smallest_prime_divisor(R: int) -> int:
    if R < 2:
        raise InvalidParameterError("R must be at least 2", precondition="R >= 2")
    return int(min(primefactors(R)))


def swap_block_tails(P: PhaseMatrix, T: int) -> PhaseMatrix:
    """Swap the last two columns of every length-T block (0-based rT-2 and rT-1, r = 1..R)."""
    exps = P.exponents.copy()
    for r in range(1, P.shape[1] // T + 1):
        a, b = r * T - 2, r * T - 1
        exps[:, [a, b]] = exps[:, [b, a]]
    return PhaseMatrix(exps, P.denominator, P.set_index)


def phase_theorem1(T: int) -> PhaseMatrix:
    """P_u(t) = w_T^{ut}."""
    _check_T(T)
    u = np.arange(T)[:, None]
    t = np.arange(T)[None, :]
    return PhaseMatrix(u * t, T)


def phase_corollary1(T: int) -> PhaseMatrix:
    return swap_block_tails(phase_theorem1(T), T)


def phase_theorem2(R: int, T: int, m: int) -> PhaseMatrix:
    """
    P_u^m(t + rT) = w_R^{(m+1) r (r+1) / 2} * w_T^{ut}, over denominator RT.

    Raises:
        InvalidParameterError: R even, R < 3, or m outside [0, R* - 1)
    """
    _check_T(T)
    if R < 3 or R % 2 == 0:
        raise InvalidParameterError("R must be odd for Theorem 2", precondition="R odd >= 3")
    limit = smallest_prime_divisor(R) - 1
    if not 0 <= m < limit:
        raise InvalidParameterError(
            f"set index m={m} outside [0, {limit})", precondition="0 <= m < R* - 1"
        )
    u = np.arange(T)[:, None, None]
    r = np.arange(R)[None, :, None]
    t = np.arange(T)[None, None, :]
    exps = (m + 1) * (r * (r + 1) // 2) * T + u * t * R
    return PhaseMatrix(exps.reshape(T, R * T), R * T, set_index=m)


def phase_corollary2(R: int, T: int, m: int) -> PhaseMatrix:
    return swap_block_tails(phase_theorem2(R, T, m), T)


def phase_theorem3(R: int, T: int) -> PhaseMatrix:
    """P_u(t + rT) = w_{2R}^{r^2} * w_T^{ut}, over denominator 2RT."""
    _check_T(T)
    if R < 2 or R % 2:
        raise InvalidParameterError("R must be even for Theorem 3", precondition="R even >= 2")
    u = np.arange(T)[:, None, None]
    r = np.arange(R)[None, :, None]
    t = np.arange(T)[None, None, :]
    exps = r * r * T + u * t * 2 * R
    return PhaseMatrix(exps.reshape(T, R * T), 2 * R * T)


def phase_corollary3(R: int, T: int) -> PhaseMatrix:
    return swap_block_tails(phase_theorem3(R, T), T)
