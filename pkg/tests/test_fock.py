import cmath
import math

import numpy as np
import pytest

from squeezekit import (
    NonPhysicalStateError,
    OneModeGaussian,
    OperatorWord,
    TwoModeGaussian,
    WitnessKind,
    beam_splitter,
    bs_output_is_separable,
    purity_one_mode,
    w2_expectation,
    werner_mix,
    whbt_closed_form_epr,
)
from squeezekit import fock

from conftest import random_physical_one_mode

SQRT2 = math.sqrt(2.0)


def _expm_taylor(g, scalings=12, terms=40):
    # Independent matrix exponential: scaling and squaring with a plain
    # Taylor series.
    m = g / (2.0 ** scalings)
    out = np.eye(g.shape[0], dtype=complex)
    term = np.eye(g.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ m / k
        out = out + term
    for _ in range(scalings):
        out = out @ out
    return out


class TestLadderOperators:
    def test_annihilation_matrix(self):
        a = fock.annihilation(4)
        assert a[0, 1] == pytest.approx(1.0)
        assert a[1, 2] == pytest.approx(math.sqrt(2.0))
        assert a[2, 3] == pytest.approx(math.sqrt(3.0))
        assert np.count_nonzero(a) == 3

    def test_commutator_on_retained_block(self):
        a = fock.annihilation(30)
        comm = a @ a.conj().T - a.conj().T @ a
        assert np.allclose(comm[:29, :29], np.eye(29)[:29, :29] * 1.0)


class TestUnitaries:
    def test_squeeze_is_exactly_unitary(self):
        u = fock.squeeze_unitary(40, 0.7, 0.8)
        assert np.max(np.abs(u.conj().T @ u - np.eye(40))) < 1e-12

    def test_squeeze_matches_taylor_series(self):
        cutoff, r, phi = 14, 0.35, 1.1
        a = fock.annihilation(cutoff)
        xi = r * cmath.exp(1j * phi)
        g = 0.5 * (np.conj(xi) * (a @ a) - xi * (a.conj().T @ a.conj().T))
        assert np.max(np.abs(fock.squeeze_unitary(cutoff, r, phi) - _expm_taylor(g))) < 1e-10

    def test_beam_splitter_matches_taylor_series(self):
        cutoff, lam = 8, 0.9
        a = fock.annihilation(cutoff)
        ad = a.conj().T
        eye = np.eye(cutoff)
        phase = cmath.exp(1j * lam)
        g = (math.pi / 4.0) * (phase * np.kron(ad, a) - np.conj(phase) * np.kron(a, ad))
        nb = np.kron(eye, np.diag(np.arange(cutoff)))
        rot = _expm_taylor(1j * (lam + math.pi) * nb)
        expected = rot @ _expm_taylor(g)
        assert np.max(np.abs(fock.beam_splitter_unitary(cutoff, lam).dense() - expected)) < 1e-9

    def test_two_mode_squeeze_matches_taylor_series(self):
        cutoff, r, phi = 8, 0.4, -0.7
        a = fock.annihilation(cutoff)
        ad = a.conj().T
        xi = r * cmath.exp(1j * phi)
        g = np.conj(xi) * np.kron(a, a) - xi * np.kron(ad, ad)
        got = fock.two_mode_squeeze_unitary(cutoff, r, phi).dense()
        assert np.max(np.abs(got - _expm_taylor(g))) < 1e-10

    def test_truncated_unitarity_on_retained_block(self):
        # Unitarity defect below 1e-8 away from the truncation boundary
        # (the construction is exactly unitary everywhere, so this holds
        # with a wide margin).
        for u in (fock.beam_splitter_unitary(20, 1.3).dense(),
                  fock.two_mode_squeeze_unitary(20, 0.5, 0.2).dense()):
            defect = u.conj().T @ u - np.eye(u.shape[0])
            keep = int(0.8 * u.shape[0])
            assert np.max(np.abs(defect[:keep, :keep])) < 1e-8

    def test_block_conjugate_matches_dense(self):
        u = fock.beam_splitter_unitary(8, 0.6)
        rng = np.random.default_rng(5)
        m = rng.normal(size=(64, 64)) + 1j * rng.normal(size=(64, 64))
        rho = m @ m.conj().T
        dense = u.dense()
        assert np.allclose(u.conjugate(rho), dense @ rho @ dense.conj().T, atol=1e-9)

    def test_block_column_extraction(self):
        u = fock.two_mode_squeeze_unitary(10, 0.3, 0.4)
        dense = u.dense()
        for idx in (0, 7, 55, 99):
            assert np.allclose(u.column(idx), dense[:, idx], atol=1e-12)


class TestOneModeDensity:
    def test_vacuum(self):
        rho = fock.one_mode_density(OneModeGaussian(0.0, 0j), 10)
        expected = np.zeros((10, 10))
        expected[0, 0] = 1.0
        assert np.allclose(rho.matrix, expected, atol=1e-14)

    def test_thermal_geometric_law(self):
        rho = fock.one_mode_density(OneModeGaussian(1.0, 0j), 40)
        diag = rho.diagonal()
        ks = np.arange(40)
        assert np.allclose(diag, 0.5 * 0.5 ** ks, atol=1e-12)
        n1 = fock.moment(rho, OperatorWord.parse("ad a"))
        assert n1.real == pytest.approx(1.0, abs=1e-6)

    def test_second_moments_match_parameters(self, rng):
        for _ in range(10):
            s = random_physical_one_mode(rng, n_max=1.2, frac_max=0.9)
            rho = fock.one_mode_density(s, 40)
            assert fock.moment(rho, OperatorWord.parse("ad a")) == pytest.approx(s.n, abs=1e-6)
            assert fock.moment(rho, OperatorWord.parse("a a")) == pytest.approx(-s.m, abs=1e-6)

    def test_g2_of_experimental_state(self):
        s = OneModeGaussian(0.12041666666666662, 0.28708333333333336 + 0j)
        rho = fock.one_mode_density(s, 40)
        n1 = fock.moment(rho, OperatorWord.parse("ad a")).real
        n2 = fock.moment(rho, OperatorWord.parse("ad ad a a")).real
        assert n2 / n1 ** 2 == pytest.approx(7.68, abs=1e-2)
        assert n2 / n1 ** 2 == pytest.approx(7.683851965373983, abs=1e-4)

    def test_purity_matches_closed_form(self, rng):
        for _ in range(10):
            s = random_physical_one_mode(rng, n_max=1.2, frac_max=0.9)
            rho = fock.one_mode_density(s, 40)
            assert rho.purity() == pytest.approx(purity_one_mode(s), abs=1e-6)

    def test_nonphysical_rejected(self):
        with pytest.raises(NonPhysicalStateError):
            fock.one_mode_density(OneModeGaussian(0.5, 1.0 + 0j), 20)

    def test_convergence_error_carries_deficit(self):
        with pytest.raises(fock.ConvergenceError) as err:
            fock.one_mode_density(OneModeGaussian(2.5, 0j), 15)
        assert err.value.deficit > 1e-6

    def test_deficit_decreases_with_cutoff(self):
        s = OneModeGaussian(1.4, 0.5 + 0j)
        deficits = [
            fock.one_mode_density(s, cutoff, eps_tr=1.0).trace_deficit
            for cutoff in (15, 25, 40)
        ]
        assert deficits[0] > deficits[1] > deficits[2] >= 0.0

    def test_diagonal_entries_nonnegative_for_physical_states(self, rng):
        for _ in range(5):
            s = random_physical_one_mode(rng, n_max=1.0, frac_max=0.9)
            rho = fock.one_mode_density(s, 30)
            assert rho.diagonal().min() >= -1e-8
        two = fock.two_mode_density(TwoModeGaussian.epr(1.0, 1.2 + 0j), 25)
        assert two.diagonal().min() >= -1e-8


class TestTwoModeDensity:
    def test_thermal_product(self):
        rho = fock.two_mode_density(TwoModeGaussian.thermal_pair(0.5), 25)
        one = fock.one_mode_density(OneModeGaussian(0.5, 0j), 25)
        assert np.allclose(rho.matrix, np.kron(one.matrix, one.matrix), atol=1e-12)

    def test_epr_boundary_state_is_pure(self):
        rho = fock.two_mode_density(TwoModeGaussian.epr(1.0, complex(SQRT2)), 40)
        assert rho.purity() >= 1.0 - 1e-4

    def test_bs_route_equals_tms_route(self):
        # The same cross-correlated state assembled through the two-mode
        # squeezer and as a beam-splitter image of opposite squeezed states.
        mc = 0.9
        tms = fock.two_mode_density(TwoModeGaussian.epr(1.0, complex(mc)), 30)
        bs = fock.bs_output_density(OneModeGaussian(1.0, complex(mc)),
                                    OneModeGaussian(1.0, complex(-mc)), 0.0, 30)
        assert np.max(np.abs(tms.matrix - bs.matrix)) < 1e-8

    def test_bs_output_matches_epr_entrywise(self):
        s = OneModeGaussian(1.0, complex(SQRT2))
        rho_bs = fock.bs_output_density(s, s, math.pi / 2, 40)
        rho_epr = fock.two_mode_density(TwoModeGaussian.epr(1.0, complex(SQRT2)), 40)
        assert np.max(np.abs(rho_bs.matrix - rho_epr.matrix)) < 1e-6

    def test_second_moments_match_fields(self, rng):
        words = {
            "n_a": OperatorWord.parse("ad a"),
            "n_b": OperatorWord.parse("bd b"),
            "m_a": OperatorWord.parse("a a"),
            "m_b": OperatorWord.parse("b b"),
            "m_c": OperatorWord.parse("a b"),
            "m_x": OperatorWord.parse("ad b"),
        }
        for _ in range(5):
            sa = random_physical_one_mode(rng, n_max=1.0, frac_max=0.8)
            sb = random_physical_one_mode(rng, n_max=1.0, frac_max=0.8)
            state = beam_splitter(sa, sb, float(rng.uniform(0, 2 * math.pi)))
            rho = fock.two_mode_density(state, 40)
            assert fock.moment(rho, words["n_a"]) == pytest.approx(state.n, abs=1e-4)
            assert fock.moment(rho, words["n_b"]) == pytest.approx(state.n, abs=1e-4)
            assert fock.moment(rho, words["m_a"]) == pytest.approx(-state.m_a, abs=1e-4)
            assert fock.moment(rho, words["m_b"]) == pytest.approx(-state.m_b, abs=1e-4)
            assert fock.moment(rho, words["m_c"]) == pytest.approx(-state.m_c, abs=1e-4)
            assert fock.moment(rho, words["m_x"]) == pytest.approx(state.m_x, abs=1e-4)

    def test_werner_mixture_density(self):
        mixture = werner_mix(TwoModeGaussian.epr(0.8, 0.9 + 0j), 0.6)
        rho = fock.two_mode_density(mixture, 30)
        epr = fock.two_mode_density(TwoModeGaussian.epr(0.8, 0.9 + 0j), 30)
        thermal = fock.two_mode_density(TwoModeGaussian.thermal_pair(0.8), 30)
        assert np.allclose(rho.matrix, 0.6 * epr.matrix + 0.4 * thermal.matrix, atol=1e-12)

    def test_nonphysical_rejected(self):
        with pytest.raises(NonPhysicalStateError):
            fock.two_mode_density(TwoModeGaussian.epr(1.0, 1.5 + 0j), 25)

    def test_unsupported_pattern_raises(self):
        bad = TwoModeGaussian(1.0, 0.5 + 0j, 0.1 + 0j, 0.2 + 0j, 0j)
        with pytest.raises(fock.UnsupportedStateError):
            fock.two_mode_density(bad, 20)


class TestMoments:
    def test_epr_pair_moment(self):
        # ⟨a²b²⟩ = 2⟨ab⟩² on the cross-correlated family; the daggered
        # variant ⟨a†²b²⟩ vanishes there (no pairing connects it).
        rho = fock.two_mode_density(TwoModeGaussian.epr(1.0, 1.0 + 0j), 30)
        got = fock.moment(rho, OperatorWord.from_counts(annihilate_a=2, annihilate_b=2))
        assert got == pytest.approx(2.0, abs=1e-3)
        crossed = fock.moment(rho, OperatorWord.from_counts(create_a=2, annihilate_b=2))
        assert abs(crossed) < 1e-6

    def test_experimental_fourth_moment(self):
        s = OneModeGaussian(0.12041666666666662, 0.28708333333333336 + 0j)
        rho = fock.one_mode_density(s, 40)
        got = fock.moment(rho, OperatorWord.parse("ad ad a a")).real
        assert got == pytest.approx(2 * s.n ** 2 + abs(s.m) ** 2, abs=1e-4)

    def test_truncation_unsafe_word_rejected(self):
        rho = fock.one_mode_density(OneModeGaussian(0.5, 0j), 10, eps_tr=1.0)
        with pytest.raises(ValueError):
            fock.moment(rho, OperatorWord.from_counts(create_a=3, annihilate_a=3))

    def test_moment_table_matches_single_queries(self, rng):
        s = random_physical_one_mode(rng, n_max=0.8, frac_max=0.8)
        pair = TwoModeGaussian.pair_with_phase(s, 0.9)
        rho = fock.two_mode_density(pair, 25)
        table = fock.moment_table(rho, 4)
        for counts in [(1, 0, 1, 0), (2, 0, 0, 2), (1, 1, 1, 1), (0, 0, 2, 2)]:
            word = OperatorWord.from_counts(*counts)
            assert table[counts] == pytest.approx(fock.moment(rho, word), rel=1e-10, abs=1e-12)

    def test_mode_b_word_on_one_mode_density_rejected(self):
        rho = fock.one_mode_density(OneModeGaussian(0.5, 0j), 10, eps_tr=1.0)
        with pytest.raises(ValueError):
            fock.moment(rho, OperatorWord.parse("bd b"))


class TestPartialTranspose:
    def test_product_state_is_ppt(self):
        rho = fock.two_mode_density(TwoModeGaussian.thermal_pair(0.8), 25)
        assert fock.ppt_min_eigenvalue(rho) >= -1e-10

    def test_entangled_epr_is_npt(self):
        rho = fock.two_mode_density(TwoModeGaussian.epr(1.0, 1.3 + 0j), 30)
        assert fock.ppt_min_eigenvalue(rho) < -1e-3

    def test_separable_epr_is_ppt(self):
        rho = fock.two_mode_density(TwoModeGaussian.epr(1.0, 0.8 + 0j), 30)
        assert fock.ppt_min_eigenvalue(rho) >= -1e-6

    def test_one_mode_rejected(self):
        rho = fock.one_mode_density(OneModeGaussian(0.5, 0j), 10, eps_tr=1.0)
        with pytest.raises(ValueError):
            fock.ppt_min_eigenvalue(rho)

    def test_bs_output_ppt_crossing_matches_analytic_boundary(self):
        # Analytic boundary at λ=π/2: m² + m = n(n+1); for n=1 that is
        # m* = 1. The partial-transpose sign flip lands within 0.01 of it.
        n = 1.0
        m_star = 0.5 * (math.sqrt(1.0 + 4.0 * n * (n + 1.0)) - 1.0)
        assert m_star == pytest.approx(1.0, abs=1e-12)
        s_below = OneModeGaussian(n, complex(m_star - 0.01))
        s_above = OneModeGaussian(n, complex(m_star + 0.01))
        rho_below = fock.bs_output_density(s_below, s_below, math.pi / 2, 30)
        rho_above = fock.bs_output_density(s_above, s_above, math.pi / 2, 30)
        assert fock.ppt_min_eigenvalue(rho_below) >= -1e-6
        assert fock.ppt_min_eigenvalue(rho_above) < -1e-6
        assert bs_output_is_separable(n, m_star - 0.01, math.pi / 2)
        assert not bs_output_is_separable(n, m_star + 0.01, math.pi / 2)


class TestWitnessExpectations:
    def test_w2_of_experimental_state(self):
        s = OneModeGaussian(0.12041666666666662, 0.28708333333333336 + 0j)
        rho = fock.one_mode_density(s, 40)
        got = fock.expectation_of_witness(rho, WitnessKind.W2)
        assert got == pytest.approx(-4.68, abs=1e-2)
        assert got == pytest.approx(w2_expectation(s).value, abs=1e-3)

    def test_whbt_of_experimental_pair(self):
        s = OneModeGaussian(0.12041666666666662, 0.28708333333333336 + 0j)
        pair = TwoModeGaussian.pair_with_phase(s, 0.0)
        rho = fock.two_mode_density(pair, 40)
        got = fock.expectation_of_witness(rho, WitnessKind.WHBT)
        assert got == pytest.approx(-0.27, abs=5e-3)

    def test_whbt_of_separable_epr(self):
        rho = fock.two_mode_density(TwoModeGaussian.epr(1.0, 0.5 + 0j), 30)
        got = fock.expectation_of_witness(rho, WitnessKind.WHBT)
        assert got == pytest.approx(whbt_closed_form_epr(1.0, 0.5), abs=1e-3)
        assert got == pytest.approx(0.75 / 6.5, abs=1e-3)

    def test_vacuum_normalization_rejected(self):
        rho = fock.one_mode_density(OneModeGaussian(0.0, 0j), 10)
        with pytest.raises(ZeroDivisionError):
            fock.expectation_of_witness(rho, WitnessKind.W2)

    def test_mode_count_validation(self):
        one = fock.one_mode_density(OneModeGaussian(0.5, 0j), 10, eps_tr=1.0)
        two = fock.two_mode_density(TwoModeGaussian.thermal_pair(0.5), 10, eps_tr=1.0)
        with pytest.raises(ValueError):
            fock.expectation_of_witness(one, WitnessKind.WHBT)
        with pytest.raises(ValueError):
            fock.expectation_of_witness(two, WitnessKind.W2)


class TestPhysicalitySummary:
    def test_matches_unprojected_candidate_spectrum(self):
        # Rebuild the unprojected working candidate explicitly and compare
        # its dense spectrum with the closed-form summary.
        state = TwoModeGaussian(0.9, 0.5 * cmath.exp(0.3j), 0.5 * cmath.exp(1.2j),
                                0.4 * cmath.exp(-0.5j), 0j)
        cutoff = 12
        plan = fock._plan_two_mode(state)
        made = []
        for factor in (plan.factor1, plan.factor2):
            w = fock._thermal_weights(factor.nbar, cutoff)
            u = fock.squeeze_unitary(cutoff, factor.r, factor.phi)
            made.append((u * w) @ u.conj().T)
        candidate = np.kron(made[0], made[1])
        mixer = fock.beam_splitter_unitary(cutoff, 0.0)
        candidate = mixer.conjugate(candidate)
        d = fock.rotation_phases(cutoff, plan.theta_c, plan.theta_d)
        candidate = d[:, None] * candidate * d.conj()[None, :]
        dense_min = float(np.linalg.eigvalsh((candidate + candidate.conj().T) / 2)[0])
        summary_min, deficit = fock.physicality_summary(state, cutoff)
        assert summary_min == pytest.approx(dense_min, abs=1e-12)
        assert deficit == pytest.approx(1.0 - float(np.trace(candidate).real), abs=1e-12)

    def test_none_for_wildly_nonphysical_moments(self):
        state = TwoModeGaussian.epr(0.5, 2.0 + 0j)
        assert fock.physicality_summary(state, 15) is None

    def test_negative_weight_for_slightly_nonphysical(self):
        state = TwoModeGaussian.epr(1.0, 1.43 + 0j)
        min_eig, _ = fock.physicality_summary(state, 15)
        assert min_eig < -1e-8


class TestDump:
    def test_round_trip(self, tmp_path):
        rho = fock.two_mode_density(TwoModeGaussian.epr(0.7, 0.6 + 0.2j), 12, eps_tr=1e-2)
        path = tmp_path / "density.bin"
        fock.save_density(rho, path)
        loaded = fock.load_density(path)
        assert loaded.modes == 2
        assert loaded.cutoff == 12
        assert np.array_equal(loaded.matrix, rho.matrix)
        assert loaded.trace_deficit == pytest.approx(rho.trace_deficit, abs=1e-12)

    def test_header_layout(self, tmp_path):
        rho = fock.one_mode_density(OneModeGaussian(0.3, 0j), 5, eps_tr=1e-2)
        path = tmp_path / "density.bin"
        fock.save_density(rho, path)
        raw = path.read_bytes()
        assert len(raw) == 16 + 25 * 16
        assert raw[:16] == (1).to_bytes(4, "little") + (5).to_bytes(4, "little") + b"\x00" * 8
