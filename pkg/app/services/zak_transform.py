"""
Finite Zak transform, its inverse and Zak-space correlation.

Conventions: a period-N sequence with N = L*T is laid out as x[l, t] = s(t + l*T).
The forward transform is unnormalised, X(j, t) = sum_l s(t + lT) w_L^{-lj};
the inverse carries the 1/L factor.
"""
import structlog
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from app.core.exceptions import DimensionMismatchError, InvalidParameterError
from app.models.sequence import ComplexSequence, ZakMatrix

logger = structlog.get_logger()


def _check_factorization(period: int, L: int, T: int) -> None:
    if L < 1 or T < 1:
        raise InvalidParameterError("L and T must be positive", precondition="L, T > 0")
    if L * T != period:
        raise DimensionMismatchError(
            f"L*T = {L * T} does not match the sequence period {period}",
            expected=period,
            actual=L * T,
        )


def fzt(s: ComplexSequence, L: int, T: int) -> ZakMatrix:
    """
    Finite Zak transform of ``s`` onto an L x T grid.

    With T = 1 this is the N-point DFT with kernel w_N^{-lj}.
    """
    _check_factorization(s.period, L, T)
    x = s.samples.reshape(L, T)
    return ZakMatrix(np.fft.fft(x, axis=0), label=s.label)


def ifzt(X: ZakMatrix) -> ComplexSequence:
    """Inverse finite Zak transform, s(t + lT) = L^{-1} sum_j X(j, t) w_L^{lj}."""
    x = np.fft.ifft(X.entries, axis=0)
    return ComplexSequence(x.reshape(-1), label=X.label)


def quasi_periodic_extension(X: ZakMatrix) -> np.ndarray:
    """
    L x 2T array holding X(j, t) for 0 <= t < 2T.

    Columns past T follow X(j, t + T) = w_L^j X(j, t), which is the Zak transform
    of the sequence advanced by T samples.
    """
    L = X.rows
    twist = np.exp(2j * np.pi * np.arange(L) / L)[:, None]
    return np.concatenate([X.entries, X.entries * twist], axis=1)


def _check_same_shape(X: ZakMatrix, Y: ZakMatrix) -> None:
    if X.shape != Y.shape:
        raise DimensionMismatchError(
            "Zak matrices must have the same shape",
            expected=list(X.shape),
            actual=list(Y.shape),
        )


def zak_correlate(X: ZakMatrix, Y: ZakMatrix) -> ZakMatrix:
    """Zak-space correlation Z(j, t) = sum_k X(j, k + t) Y*(j, k)."""
    _check_same_shape(X, Y)
    T = X.cols
    windows = sliding_window_view(quasi_periodic_extension(X), T, axis=1)[:, :T, :]
    Z = np.einsum("jtk,jk->jt", windows, np.conj(Y.entries))
    return ZakMatrix(Z)


def correlation_via_zak(X: ZakMatrix, Y: ZakMatrix, tau1: int, tau2: int) -> complex:
    """theta_{s0,s1}(tau1 + tau2*T) evaluated in the Zak domain."""
    _check_same_shape(X, Y)
    L, T = X.shape
    if not 0 <= tau1 < T:
        raise InvalidParameterError(f"tau1={tau1} outside [0, {T})", precondition="0 <= tau1 < T")
    if not 0 <= tau2 < L:
        raise InvalidParameterError(f"tau2={tau2} outside [0, {L})", precondition="0 <= tau2 < L")
    Z = zak_correlate(X, Y).entries[:, tau1]
    kernel = np.exp(2j * np.pi * tau2 * np.arange(L) / L)
    return complex(np.sum(Z * kernel) / L)


def correlation_profile_via_zak(X: ZakMatrix, Y: ZakMatrix) -> np.ndarray:
    """Full periodic cross-correlation, index tau = tau1 + tau2*T, from the Zak domain."""
    return ifzt(zak_correlate(X, Y)).samples.copy()
