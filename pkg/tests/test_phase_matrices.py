"""
Phase matrix generator tests.
"""
import numpy as np
import pytest

from app.core.exceptions import InvalidParameterError
from app.models.family import PhaseMatrix
from app.models.sequence import ComplexSequence, UnitRootPhase
from app.services.phase_matrices import (
    phase_corollary1,
    phase_corollary2,
    phase_corollary3,
    phase_theorem1,
    phase_theorem2,
    phase_theorem3,
    smallest_prime_divisor,
    swap_block_tails,
)


class TestPrintedPhases:
    """Printed exponent tables."""

    def test_odd_r_both_sets(self, odd_r_phases):
        """R=3, T=5 phases for m=0 and m=1 over w_15."""
        for m in (0, 1):
            P = phase_theorem2(3, 5, m)
            assert P.denominator == 15
            assert P.set_index == m
            np.testing.assert_array_equal(P.exponents, odd_r_phases[m])

    def test_even_r(self, even_r_phases):
        """R=2, T=6 phases; the generator works over 2RT = 24, the table over 12."""
        P = phase_theorem3(2, 6)
        assert P.denominator == 24
        np.testing.assert_array_equal(P.exponents, np.mod(2 * even_r_phases, 24))

    def test_single_block(self):
        P = phase_theorem1(5)
        assert P.shape == (5, 5)
        assert P.exponents[2, 3] == 1


class TestCorollaries:
    """Block-tail swaps."""

    def test_swap_positions(self):
        """Columns rT-2 and rT-1 of every block trade places."""
        P = phase_theorem3(2, 6)
        C = phase_corollary3(2, 6)
        swapped = P.exponents[:, [0, 1, 2, 3, 5, 4, 6, 7, 8, 9, 11, 10]]
        np.testing.assert_array_equal(C.exponents, swapped)

    def test_swap_is_involution(self):
        P = phase_theorem2(5, 7, 1)
        np.testing.assert_array_equal(swap_block_tails(swap_block_tails(P, 7), 7).exponents, P.exponents)

    def test_corollary_generators(self):
        np.testing.assert_array_equal(phase_corollary1(5).exponents[:, [3, 4]], phase_theorem1(5).exponents[:, [4, 3]])
        assert phase_corollary2(3, 5, 1).set_index == 1


class TestPreconditions:
    """Parameter checks."""

    def test_theorem2_rejects_even_r(self):
        with pytest.raises(InvalidParameterError, match="R must be odd for Theorem 2"):
            phase_theorem2(4, 5, 0)

    def test_theorem3_rejects_odd_r(self):
        with pytest.raises(InvalidParameterError, match="R must be even for Theorem 3"):
            phase_theorem3(3, 5)

    def test_small_t_rejected(self):
        with pytest.raises(InvalidParameterError) as exc:
            phase_theorem1(3)
        assert exc.value.precondition == "T > 3"

    def test_set_index_limited_by_smallest_prime(self):
        """R = 15 has smallest prime divisor 3, so only m = 0, 1 exist."""
        assert smallest_prime_divisor(15) == 3
        phase_theorem2(15, 5, 1)
        with pytest.raises(InvalidParameterError):
            phase_theorem2(15, 5, 2)


class TestPhaseMatrix:
    """Value type behaviour."""

    def test_exponents_reduced(self):
        P = PhaseMatrix([[5, -1]], 4)
        assert P.exponents.tolist() == [[1, 3]]

    def test_rescaled(self):
        P = phase_theorem1(4).rescaled(16)
        assert P.denominator == 16
        np.testing.assert_allclose(P.values, phase_theorem1(4).values, atol=1e-12)

    def test_rescale_requires_multiple(self):
        with pytest.raises(InvalidParameterError):
            phase_theorem1(4).rescaled(6)

    def test_immutable(self):
        P = phase_theorem1(4)
        with pytest.raises(ValueError):
            P.exponents[0, 0] = 1

    def test_entry_exact_under_rescale(self):
        """Entries compare equal as phases whatever the common denominator."""
        P = phase_theorem2(3, 5, 1)
        Q = P.rescaled(60)
        for u, column in [(0, 0), (2, 7), (4, 14)]:
            assert Q.entry(u, column) == P.entry(u, column)
            assert Q.entry(u, column).denominator == 60


class TestUnitRootPhase:
    """Exact phases."""

    def test_normalised_numerator(self):
        assert UnitRootPhase(-1, 8).numerator == 7
        assert UnitRootPhase(17, 8).numerator == 1

    def test_reduced_equality_and_hash(self):
        assert UnitRootPhase(2, 8) == UnitRootPhase(1, 4)
        assert hash(UnitRootPhase(6, 12)) == hash(UnitRootPhase(1, 2))
        assert UnitRootPhase(1, 4) != UnitRootPhase(1, 8)
        assert UnitRootPhase.reduced(0, 6) == UnitRootPhase(0, 1)

    def test_product_and_conjugate(self):
        assert UnitRootPhase(1, 4) * UnitRootPhase(1, 6) == UnitRootPhase(5, 12)
        assert UnitRootPhase(3, 8) * UnitRootPhase(3, 8).conjugate() == UnitRootPhase(0, 1)
        assert complex(UnitRootPhase(1, 4)) == pytest.approx(1j)

    def test_positive_denominator(self):
        with pytest.raises(InvalidParameterError):
            UnitRootPhase(1, 0)

    def test_evaluate_mixed_denominators(self):
        values = UnitRootPhase.evaluate([UnitRootPhase(1, 4), UnitRootPhase(1, 2), UnitRootPhase(1, 3)])
        np.testing.assert_allclose(values, [1j, -1, np.exp(2j * np.pi / 3)], atol=1e-12)

    def test_sequence_phases(self):
        """from_exponents and to_phases agree through the exact form."""
        seq = ComplexSequence.from_exponents([0, 2, 4, 6], 8)
        np.testing.assert_allclose(seq.samples, [1, 1j, -1, -1j], atol=1e-12)
        assert seq.to_phases(8) == (UnitRootPhase(0, 1), UnitRootPhase(1, 4), UnitRootPhase(1, 2), UnitRootPhase(3, 4))
        same = ComplexSequence.from_phases(seq.to_phases(8))
        np.testing.assert_allclose(same.samples, seq.samples, atol=1e-12)
