"""
Zak-domain family generator tests.
"""
from math import sqrt

import numpy as np
import pytest

from app.core.exceptions import InvalidParameterError
from app.models.family import IndexSource, PhaseMatrix, Theorem
from app.services.phase_matrices import phase_theorem1, phase_theorem2, phase_theorem3
from app.services.sequence_analysis import certify_family
from app.services.zak_transform import fzt, ifzt
from app.services.zcz_generator import (
    assemble_zak,
    family_denominator,
    family_lemma_report,
    generate_family,
    generate_set,
    max_set_count,
    sequence_exponents,
    sequence_from_exponents,
    verify_lemma5,
    verify_lemma7,
    verify_lemma8,
)


def _flip(P: PhaseMatrix, u: int, column: int) -> PhaseMatrix:
    """Negate one entry."""
    return P.with_entry(u, column, int(P.exponents[u, column]) + P.denominator // 2)


class TestGoldenFamilies:
    """Printed sequences, Zak matrices and index rows."""

    def test_period_sixteen_sequences(self, period16_set):
        """R=1, T=4 reproduces all four printed sequences symbol for symbol."""
        family = generate_family(Theorem.T1, 1, 4, index_rows=[period16_set["index_row"]])
        for u, expected in enumerate(period16_set["exponents"]):
            assert family.sequence(0, u).to_exponents(4).tolist() == expected

    def test_two_set_zak_matrices(self, two_set_example):
        """Printed supports, exponents and magnitude 5*sqrt(2) for R=2, T=5."""
        for (m, u), support in two_set_example["zak"].items():
            P = PhaseMatrix(two_set_example["phases"][m], 10, m)
            X = assemble_zak(two_set_example["index_rows"][m], P, 2)[u].entries
            assert np.count_nonzero(np.abs(X) > 1e-9) == 10
            for j, (t, k) in support.items():
                assert X[j, t] == pytest.approx(5 * sqrt(2) * np.exp(2j * np.pi * k / 10), abs=1e-12)

    def test_preamble_zak_matrix(self, preamble_index_row, preamble_zak_support):
        """R=2, T=8 sequence u=1 has the 16 printed Zak entries of magnitude 8*sqrt(2)."""
        family = generate_family(Theorem.T3, 2, 8, index_rows=[preamble_index_row])
        X = fzt(family.sequence(0, 1), 16, 8).entries
        assert np.count_nonzero(np.abs(X) > 1e-9) == 16
        for j, (t, k) in preamble_zak_support.items():
            assert X[j, t] == pytest.approx(8 * sqrt(2) * np.exp(2j * np.pi * k / 16), abs=1e-9)

    def test_odd_r_family(self, odd_r_index_rows, odd_r_phases):
        """R=3, T=5 with the first extension uses the printed index rows and phases."""
        family = generate_family(Theorem.T2, 3, 5, q=1, row_selection=[0, 1])
        assert family.index_matrix.rows.tolist() == odd_r_index_rows
        assert family.index_matrix.source is IndexSource.EXTENDED
        for m in (0, 1):
            np.testing.assert_array_equal(family.phase_matrices[m].exponents, odd_r_phases[m])
        certificate = certify_family(family)
        assert certificate.all_hold
        assert (certificate.sets[0].N, certificate.sets[0].set_size, certificate.sets[0].zcz_width) == (75, 5, 15)
        assert certificate.inter_set.theta_c == pytest.approx(5 * sqrt(3), abs=1e-9)


class TestAssembly:
    """Zak assembly against direct sequence generation."""

    @pytest.mark.parametrize("R,T,P", [(1, 5, phase_theorem1(5)), (3, 5, phase_theorem2(3, 5, 1)),
                                       (2, 6, phase_theorem3(2, 6))])
    def test_generate_set_is_inverse_of_assembly(self, R, T, P):
        A = np.roll(np.arange(T), 1)
        sequences = generate_set(A, P, R)
        for seq, X in zip(sequences, assemble_zak(A, P, R)):
            np.testing.assert_allclose(seq.samples, ifzt(X).samples, atol=1e-12)

    def test_unimodular_output(self):
        for seq in generate_set(np.arange(6), phase_theorem3(2, 6), 2):
            assert seq.is_unimodular(1e-12)

    def test_bad_index_row(self):
        with pytest.raises(InvalidParameterError):
            assemble_zak([0, 1, 1, 3, 4], phase_theorem1(5), 1)

    def test_exponents_exact(self):
        """Every generated sample is a root of unity of order dividing 8RT."""
        family = generate_family(Theorem.T3, 2, 6)
        D = family_denominator(2, 6)
        for seq in family.all_sequences():
            exps = sequence_exponents(seq, D)
            np.testing.assert_allclose(np.exp(2j * np.pi * exps / D), seq.samples, atol=1e-12)
            np.testing.assert_allclose(sequence_from_exponents(exps, D).samples, seq.samples, atol=1e-12)

    def test_exponents_reject_off_grid_samples(self):
        seq = generate_family(Theorem.T1, 1, 5).sequence(0, 1)
        with pytest.raises(InvalidParameterError):
            sequence_exponents(seq.scaled(np.exp(0.1j)), family_denominator(1, 5))


class TestAdmissibilityChecks:
    """Unimodularity, zero-zone and inter-set verifiers."""

    def test_generated_families_pass(self):
        for theorem, R, T in [("T1", 1, 5), ("C1", 1, 7), ("T2", 3, 5), ("C2", 3, 5), ("T3", 2, 6), ("C3", 2, 8)]:
            report = family_lemma_report(generate_family(theorem, R, T))
            assert all(report.values()), (theorem, report)

    def test_unimodularity_fails_on_flip(self):
        P = phase_theorem2(3, 5, 0)
        assert verify_lemma5(P, 3, 5)
        assert not verify_lemma5(_flip(P, 2, 7), 3, 5)

    def test_zero_zone_fails_on_flip(self, extended_arrays_5):
        """Row 0 of the first extended array is admissible; one negated phase breaks the zone."""
        P = phase_theorem1(5)
        A = np.array(extended_arrays_5[1][0])
        assert verify_lemma7(A, P, 1, 5)
        assert not verify_lemma7(A, _flip(P, 1, 2), 1, 5)

    def test_identity_row_not_admissible(self):
        """The identity index row gives a zero edge sum, so distinctness fails."""
        assert not verify_lemma7(np.arange(5), phase_theorem1(5), 1, 5)

    def test_inter_set_fails_on_flip(self):
        P0, P1 = phase_theorem2(3, 5, 0), phase_theorem2(3, 5, 1)
        assert verify_lemma8(P0, P1, 3, 5)
        assert not verify_lemma8(_flip(P0, 0, 6), P1, 3, 5)

    def test_report_needs_matrices(self, period16_set):
        from app.models.family import SequenceFamily

        generated = generate_family(Theorem.T1, 1, 4, index_rows=[period16_set["index_row"]])
        bare = SequenceFamily.from_sets(generated.sets, 1, 4)
        with pytest.raises(InvalidParameterError):
            family_lemma_report(bare)


class TestProperties:
    """Every construction certifies its promised parameters."""

    @pytest.mark.parametrize("R,T,theorem", [
        (1, 5, "T1"), (1, 7, "T1"), (1, 5, "C1"), (3, 5, "T2"), (3, 5, "C2"), (2, 6, "T3"), (2, 8, "T3"),
    ])
    def test_certified(self, R, T, theorem):
        family = generate_family(theorem, R, T)
        certificate = certify_family(family)
        assert certificate.all_hold, certificate.failures
        for cert in certificate.sets:
            assert cert.perfect
            assert cert.zcz_width == R * T
            assert cert.set_size * cert.zcz_width == cert.N == R * T * T
        assert all(all(row) for matrix in certificate.distinct for row in matrix)


class TestParameters:
    """Set counts and parameter checks."""

    def test_default_set_counts(self):
        assert generate_family("T1", 1, 5).set_count == 4
        assert generate_family("T2", 3, 5).set_count == 2
        assert generate_family("T3", 2, 8).set_count == 1

    def test_max_set_count(self):
        assert max_set_count("T1", 1, 7) == 6
        assert max_set_count("T2", 15, 7) == 2
        assert max_set_count("T3", 2, 7) == 1
        assert max_set_count("T1", 1, 6) == 1

    def test_default_extension_index(self):
        family = generate_family("T1", 1, 5)
        assert family.params.q == 1
        assert family.index_matrix.rows[0].tolist() == [0, 1, 2, 4, 3]

    def test_corollary_uses_base_array(self, base_array_5):
        family = generate_family("C1", 1, 5)
        assert family.params.q == 0
        assert family.index_matrix.rows.tolist() == base_array_5

    def test_corollary_rejects_extension(self):
        with pytest.raises(InvalidParameterError):
            generate_family("C1", 1, 5, q=2)

    @pytest.mark.parametrize("theorem,R", [("T1", 2), ("T2", 4), ("T2", 1), ("T3", 3)])
    def test_incompatible_r(self, theorem, R):
        with pytest.raises(InvalidParameterError):
            generate_family(theorem, R, 5)

    def test_small_t(self):
        with pytest.raises(InvalidParameterError) as exc:
            generate_family("T1", 1, 3)
        assert exc.value.precondition == "T > 3"

    def test_too_many_sets(self):
        with pytest.raises(InvalidParameterError):
            generate_family("T2", 3, 5, row_selection=[0, 1, 2])

    def test_duplicate_rows(self):
        with pytest.raises(InvalidParameterError):
            generate_family("T1", 1, 5, row_selection=[1, 1])

    def test_invalid_explicit_index(self):
        """Explicit index rows of several sets must form a Florentine array."""
        from app.core.exceptions import FlorentineArrayError

        with pytest.raises(FlorentineArrayError):
            generate_family("T1", 1, 5, index_rows=[[0, 1, 2, 3, 4], [0, 1, 3, 2, 4]])
