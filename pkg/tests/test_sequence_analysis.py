"""
Correlation analysis and certification tests.
"""
from math import sqrt

import numpy as np
import pytest

from app.core.exceptions import DimensionMismatchError, InvalidParameterError
from app.models.analysis import ProfileKind
from app.models.family import SequenceFamily
from app.models.sequence import ComplexSequence
from app.services.sequence_analysis import (
    alphabet_size,
    ambiguity,
    centred_shifts,
    certify_family,
    certify_set,
    cyclically_distinct,
    inter_set_theta,
    parameter_summary,
    pccf,
    sarwate_lhs,
    zak_support,
    zcz_width,
)
from app.services.zcz_generator import generate_family


@pytest.fixture
def period16_family(period16_set):
    return generate_family("T1", 1, 4, index_rows=[period16_set["index_row"]])


@pytest.fixture
def odd_r_family():
    return generate_family("T2", 3, 5, q=1, row_selection=[0, 1])


class TestPccf:
    """Periodic correlation."""

    def test_energy_at_zero(self, period16_family):
        s = period16_family.sequence(0, 1)
        profile = pccf(s, s)
        assert profile.kind is ProfileKind.AUTO
        assert profile.values[0] == pytest.approx(16)

    def test_perfect_autocorrelation(self, period16_family):
        s = period16_family.sequence(0, 1)
        assert pccf(s, s).sidelobe_peak() < 1e-9 * 16

    def test_direct_definition(self, rng):
        """values[tau] = sum_n s0(n + tau) conj(s1(n))."""
        s0 = ComplexSequence(rng.standard_normal(9) + 1j * rng.standard_normal(9))
        s1 = ComplexSequence(rng.standard_normal(9) + 1j * rng.standard_normal(9))
        values = pccf(s0, s1).values
        for tau in range(9):
            direct = sum(s0.samples[(n + tau) % 9] * np.conj(s1.samples[n]) for n in range(9))
            assert values[tau] == pytest.approx(direct, abs=1e-12)

    def test_conjugate_symmetry(self, rng):
        s = ComplexSequence(np.exp(2j * np.pi * rng.random(12)))
        v = pccf(s, s).values
        np.testing.assert_allclose(v[1:], np.conj(v[1:][::-1]), atol=1e-12)

    def test_unit_constant_scales_profile(self, rng):
        s0 = ComplexSequence(np.exp(2j * np.pi * rng.random(10)))
        s1 = ComplexSequence(np.exp(2j * np.pi * rng.random(10)))
        c = np.exp(0.7j)
        np.testing.assert_allclose(pccf(s0.scaled(c), s1).values, c * pccf(s0, s1).values, atol=1e-12)

    def test_inter_set_constant(self, odd_r_family):
        """Sequences of different sets correlate at 5*sqrt(3) for every shift."""
        mags = pccf(odd_r_family.sequence(0, 1), odd_r_family.sequence(1, 2)).magnitudes
        np.testing.assert_allclose(mags, 5 * sqrt(3), atol=1e-9)

    def test_period_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            pccf(ComplexSequence(np.ones(4)), ComplexSequence(np.ones(5)))


class TestZczWidth:
    """Measured zone width."""

    def test_period_sixteen_set(self, period16_family):
        assert zcz_width(period16_family.sets[0]) == 4

    def test_odd_r_set(self, odd_r_family):
        assert zcz_width(odd_r_family.sets[0]) == 15

    def test_identical_sequences(self, period16_family):
        s = period16_family.sequence(0, 0)
        assert zcz_width([s, s]) == 0

    def test_empty(self):
        with pytest.raises(InvalidParameterError):
            zcz_width([])


class TestSarwate:
    """Sarwate bound left-hand side."""

    def test_equality(self):
        assert sarwate_lhs(0.0, 4.0, 16, 4) == pytest.approx(1.0)

    def test_impossible_set(self):
        assert sarwate_lhs(0.0, 0.0, 16, 4) == 0.0

    def test_odd_r_family(self):
        assert sarwate_lhs(0.0, 5 * sqrt(3), 75, 5) == pytest.approx(1.0, abs=1e-9)

    def test_single_sequence_rejected(self):
        with pytest.raises(InvalidParameterError):
            sarwate_lhs(0.0, 1.0, 16, 1)


class TestInterSet:
    """Inter-set cross-correlation."""

    def test_single_block_family(self):
        """T=5, M=4: magnitude 5 at every shift of every pair."""
        report = inter_set_theta(generate_family("T1", 1, 5))
        assert report.applicable
        assert report.theta_c == pytest.approx(5, abs=1e-9)
        assert report.min_magnitude == pytest.approx(5, abs=1e-9)
        assert report.constant_over_shift
        assert len(report.per_pair) == 6

    def test_odd_r_family(self, odd_r_family):
        assert inter_set_theta(odd_r_family).theta_c == pytest.approx(5 * sqrt(3), abs=1e-9)

    def test_single_set_not_applicable(self):
        report = inter_set_theta(generate_family("T3", 2, 6))
        assert not report.applicable
        assert report.theta_c is None


class TestDistinctness:
    """Cyclic equivalence."""

    def test_shift_is_equivalent(self, period16_family):
        s = period16_family.sequence(0, 2)
        assert not cyclically_distinct(s, s.cyclic_shift(3))
        assert not cyclically_distinct(s, s.cyclic_shift(3).scaled(1j))

    def test_set_members_distinct(self, period16_family, odd_r_family):
        for family in (period16_family, odd_r_family):
            for seqs in family.sets:
                for a in range(len(seqs)):
                    for b in range(a + 1, len(seqs)):
                        assert cyclically_distinct(seqs[a], seqs[b])


class TestCertificates:
    """Set and family certification."""

    def test_set_certificate(self, period16_family):
        cert = certify_set(period16_family.sets[0])
        assert (cert.N, cert.set_size, cert.zcz_width) == (16, 4, 4)
        assert cert.tfm_optimal
        assert cert.perfect
        assert cert.unimodular
        assert cert.theta_c > 0

    def test_family_certificate(self, odd_r_family):
        cert = certify_family(odd_r_family)
        assert cert.all_hold
        assert cert.sarwate_lhs == pytest.approx(1.0, abs=1e-9)
        assert cert.expected_zcz_width == 15
        assert cert.expected_theta_c == pytest.approx(5 * sqrt(3))
        assert cert.lemma_conditions == {"unimodular": True, "zero_zone": True, "inter_set": True}

    def test_loaded_family_skips_admissibility(self, odd_r_family):
        """Families without generator matrices are certified from their samples alone."""
        bare = SequenceFamily.from_sets(odd_r_family.sets, 3, 5, theorem="T2")
        cert = certify_family(bare)
        assert cert.all_hold
        assert cert.lemma_conditions is None

    def test_broken_family_fails(self, period16_family):
        """Replacing one sequence by a shift of another breaks distinctness and the zone."""
        seqs = list(period16_family.sets[0])
        seqs[3] = seqs[0].cyclic_shift(5)
        cert = certify_family(SequenceFamily.from_sets([seqs], 1, 4, theorem="T1"))
        assert not cert.all_hold
        assert any("cyclically equivalent" in f for f in cert.failures)

    def test_parameter_summary(self, period16_family):
        summary = parameter_summary(period16_family)
        assert summary.period == 16
        assert summary.alphabet_size == 4
        assert summary.zcz_width == 4
        assert summary.theta_c is None
        assert summary.cyclically_distinct
        assert summary.available_families == 1

    def test_alphabet_of_non_root_samples(self):
        seqs = [ComplexSequence(np.full(16, 0.3 + 0.1j)) for _ in range(4)]
        assert alphabet_size(SequenceFamily.from_sets([seqs], 1, 4)) is None


class TestAmbiguity:
    """Periodic ambiguity function."""

    def test_zero_doppler_cut_is_autocorrelation(self, preamble_index_row):
        """v=0 equals the autocorrelation and vanishes off the peak."""
        s = generate_family("T3", 2, 8, index_rows=[preamble_index_row]).sequence(0, 1)
        af = ambiguity(s)
        cut = af.zero_doppler_cut()
        np.testing.assert_allclose(cut, pccf(s, s).values, atol=1e-9)
        assert af.at(0, 0) == pytest.approx(128)
        assert np.max(np.abs(cut[1:])) <= 1e-9 * 128

    def test_direct_definition(self, rng):
        s = ComplexSequence(np.exp(2j * np.pi * rng.random(8)))
        af = ambiguity(s, doppler_range=[-3, 0, 2], delay_range=[-1, 0, 5])
        for tau in (-1, 0, 5):
            for v in (-3, 0, 2):
                direct = sum(
                    s.samples[(n + tau) % 8] * np.conj(s.samples[n]) * np.exp(2j * np.pi * v * n / 8)
                    for n in range(8)
                )
                assert af.at(tau, v) == pytest.approx(direct, abs=1e-12)

    def test_range_checked(self):
        with pytest.raises(InvalidParameterError):
            ambiguity(ComplexSequence(np.ones(8)), delay_range=[8])

    def test_centred_shifts(self):
        assert centred_shifts(5).tolist() == [-2, -1, 0, 1, 2]
        assert centred_shifts(4).tolist() == [-2, -1, 0, 1]


class TestZakSupport:
    """Nonzero Zak entries."""

    def test_preamble_support(self, preamble_index_row):
        s = generate_family("T3", 2, 8, index_rows=[preamble_index_row]).sequence(0, 1)
        support = zak_support(s, 16, 8)
        assert support.count == 16
        np.testing.assert_allclose(support.magnitudes, 8 * sqrt(2), atol=1e-9)
