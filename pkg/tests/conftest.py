"""
Pytest configuration and fixtures.

Printed reference data for the golden tests: index arrays, phase matrices,
Zak matrices and sequences, all in integer exponent form.
"""
import numpy as np
import pytest

from app.models.otfs import OtfsConfig


@pytest.fixture
def florentine_4x15():
    """A 4 x 15 circular Florentine array."""
    return [
        list(range(15)),
        [0, 7, 1, 8, 2, 12, 3, 11, 9, 4, 13, 5, 14, 6, 10],
        [0, 4, 11, 7, 10, 1, 13, 9, 5, 8, 3, 6, 2, 14, 12],
        [0, 13, 7, 2, 11, 6, 14, 10, 3, 5, 12, 9, 1, 4, 8],
    ]


@pytest.fixture
def base_array_5():
    return [
        [0, 1, 2, 3, 4],
        [0, 2, 4, 1, 3],
        [0, 3, 1, 4, 2],
        [0, 4, 3, 2, 1],
    ]


@pytest.fixture
def extended_arrays_5():
    """Printed extended arrays of order 5 keyed by lexicographic extension index q."""
    return {
        1: [[0, 1, 2, 4, 3], [0, 2, 3, 1, 4], [0, 4, 1, 3, 2], [0, 3, 4, 2, 1]],
        3: [[0, 1, 3, 4, 2], [0, 3, 2, 1, 4], [0, 4, 1, 2, 3], [0, 2, 4, 3, 1]],
        2: [[0, 1, 3, 2, 4], [0, 3, 4, 1, 2], [0, 2, 1, 4, 3], [0, 4, 2, 3, 1]],
        5: [[0, 1, 4, 3, 2], [0, 4, 2, 1, 3], [0, 3, 1, 2, 4], [0, 2, 3, 4, 1]],
        4: [[0, 1, 4, 2, 3], [0, 4, 3, 1, 2], [0, 2, 1, 3, 4], [0, 3, 2, 4, 1]],
    }


@pytest.fixture
def period16_set():
    """R=1, T=4, index row (0,1,3,2): the four sequences as exponents of w_4."""
    return {
        "index_row": [0, 1, 3, 2],
        "exponents": [
            [0, 0, 0, 0, 0, 1, 3, 2, 0, 2, 2, 0, 0, 3, 1, 2],
            [0, 1, 2, 3, 0, 2, 1, 1, 0, 3, 0, 3, 0, 0, 3, 1],
            [0, 2, 0, 2, 0, 3, 3, 0, 0, 0, 2, 2, 0, 1, 1, 0],
            [0, 3, 2, 1, 0, 0, 1, 3, 0, 1, 0, 1, 0, 2, 3, 3],
        ],
    }


def _odd_block_phases(block_exponent: int) -> np.ndarray:
    """5 x 15 exponents of w_15: block r = 1 carries ``block_exponent``, plus 3*u*t."""
    u = np.arange(5)[:, None]
    t = np.arange(5)[None, :]
    blocks = [3 * u * t, block_exponent + 3 * u * t, 3 * u * t]
    return np.mod(np.concatenate(blocks, axis=1), 15)


@pytest.fixture
def odd_r_phases():
    """Phase matrices (exponents of w_15) of the two sets for R=3, T=5."""
    return {0: _odd_block_phases(5), 1: _odd_block_phases(10)}


@pytest.fixture
def odd_r_index_rows():
    return [[0, 1, 2, 4, 3], [0, 2, 3, 1, 4]]


@pytest.fixture
def even_r_phases():
    """Phase matrix (exponents of w_12) for R=2, T=6."""
    return np.array([
        [0, 0, 0, 0, 0, 0, 3, 3, 3, 3, 3, 3],
        [0, 2, 4, 6, 8, 10, 3, 5, 7, 9, 11, 1],
        [0, 4, 8, 0, 4, 8, 3, 7, 11, 3, 7, 11],
        [0, 6, 0, 6, 0, 6, 3, 9, 3, 9, 3, 9],
        [0, 8, 4, 0, 8, 4, 3, 11, 7, 3, 11, 7],
        [0, 10, 8, 6, 4, 2, 3, 1, 11, 9, 7, 5],
    ])


@pytest.fixture
def preamble_index_row():
    return [0, 1, 3, 5, 7, 4, 2, 6]


@pytest.fixture
def preamble_zak_support():
    """Nonzero entries of the R=2, T=8 Zak matrix for u=1: row j -> (column, exponent of w_16)."""
    return {
        0: (0, 0), 1: (1, 2), 2: (6, 12), 3: (2, 4), 4: (5, 10), 5: (3, 6), 6: (7, 14), 7: (4, 8),
        8: (0, 4), 9: (1, 6), 10: (6, 0), 11: (2, 8), 12: (5, 14), 13: (3, 10), 14: (7, 2), 15: (4, 12),
    }


@pytest.fixture
def two_set_example():
    """R=2, T=5 index matrix, phase exponents over 10 and the printed Zak supports."""
    col = np.arange(10)[None, :]
    u = np.arange(5)[:, None]
    return {
        "index_rows": [[0, 1, 2, 4, 3], [0, 3, 4, 2, 1]],
        "phases": {0: np.mod(u * col, 10), 1: np.mod((u + 5) * col, 10)},
        # (set, u) -> {row j: (column, exponent of w_10)}
        "zak": {
            (0, 1): {0: (0, 0), 1: (1, 1), 2: (2, 2), 3: (4, 4), 4: (3, 3),
                     5: (0, 5), 6: (1, 6), 7: (2, 7), 8: (4, 9), 9: (3, 8)},
            (1, 3): {0: (0, 0), 1: (4, 2), 2: (3, 4), 3: (1, 8), 4: (2, 6),
                     5: (0, 0), 6: (4, 2), 7: (3, 4), 8: (1, 8), 9: (2, 6)},
        },
    }


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def otfs_cfg():
    return OtfsConfig()


@pytest.fixture
def small_otfs_cfg():
    """A 4 x 4 grid for fast channel and equalizer checks."""
    return OtfsConfig(T_doppler_bins=4, L_delay_bins=4, cp_len=4, window_len=16, C_paths=2)
