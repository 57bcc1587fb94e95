import numpy as np
import pytest

from cvclone import (
    InvalidGain,
    amplifier,
    apply_symplectic,
    beam_splitter,
    beam_splitter_5050,
    coherent_state,
    cv_cnot,
    dft_network,
    phase_rotation,
    squeezer,
    symplectic_form,
    tensor,
    vacuum_state,
)


def sym_dev(t):
    omega = symplectic_form(t.n_modes)
    return np.abs(t.matrix @ omega @ t.matrix.T - omega).max()


def test_all_factories_satisfy_symplectic_condition():
    family = [
        beam_splitter_5050(0, 1, 3),
        beam_splitter(0.3, 1, 2, 3),
        amplifier(1.7, 0, 2, 3),
        cv_cnot(0, 2, +1, 3),
        cv_cnot(1, 0, -1, 3),
        squeezer(0.9, 2, 3),
        phase_rotation(1.1, 0, 3),
    ] + [dft_network(m, 0, m) for m in range(1, 7)]
    for t in family:
        assert sym_dev(t) <= 1e-10


class TestBeamSplitter5050:
    def test_splits_coherent_amplitude_evenly(self):
        state = tensor(coherent_state(np.sqrt(2.0), 0.0), vacuum_state(1))
        out = apply_symplectic(state, beam_splitter_5050(0, 1, 2))
        assert np.allclose(out.mean, [1.0, 0.0, 1.0, 0.0], atol=1e-14)

    def test_vacuum_maps_to_vacuum(self):
        out = apply_symplectic(vacuum_state(2), beam_splitter_5050(0, 1, 2))
        assert np.allclose(out.cov, 0.5 * np.eye(4), atol=1e-14)

    def test_is_involutive(self):
        bs = beam_splitter_5050(0, 1, 2)
        assert np.allclose((bs @ bs).matrix, np.eye(4), atol=1e-14)

    def test_rejects_equal_modes(self):
        with pytest.raises(IndexError):
            beam_splitter_5050(1, 1, 2)


class TestAmplifier:
    def test_unit_gain_is_identity(self):
        assert np.allclose(amplifier(1.0, 0, 1, 2).matrix, np.eye(4))

    def test_gain_two_signal_variance(self):
        # S (I/2) S^T puts (2 + 1)/2 on each signal quadrature
        out = apply_symplectic(vacuum_state(2), amplifier(2.0, 0, 1, 2))
        assert out.cov[0, 0] == pytest.approx(1.5, abs=1e-14)
        assert out.cov[1, 1] == pytest.approx(1.5, abs=1e-14)

    def test_idler_variance_is_gain_minus_half(self):
        for g in (1.0, 1.5, 2.0, 3.0):
            out = apply_symplectic(vacuum_state(2), amplifier(g, 0, 1, 2))
            assert out.cov[2, 2] == pytest.approx(g - 0.5, abs=1e-12)
            assert out.cov[3, 3] == pytest.approx(g - 0.5, abs=1e-12)

    def test_amplifies_coherent_mean_by_root_gain(self):
        state = tensor(coherent_state(1.0, 1.0), vacuum_state(1))
        out = apply_symplectic(state, amplifier(2.0, 0, 1, 2))
        assert np.allclose(out.mean[:2], [np.sqrt(2.0), np.sqrt(2.0)], atol=1e-14)

    def test_rejects_gain_below_one(self):
        with pytest.raises(InvalidGain):
            amplifier(0.9, 0, 1, 2)


class TestCvCnot:
    def test_shifts_target_position_by_control(self):
        state = tensor(coherent_state(1.0, 0.0), coherent_state(0.0, 0.0))
        out = apply_symplectic(state, cv_cnot(0, 1, +1, 2))
        assert out.mean[0] == pytest.approx(1.0)
        assert out.mean[2] == pytest.approx(1.0)

    def test_opposite_signs_compose_to_identity(self):
        gate = cv_cnot(0, 1, +1, 2)
        inverse = cv_cnot(0, 1, -1, 2)
        assert np.allclose((inverse @ gate).matrix, np.eye(4), atol=1e-14)

    def test_kicks_control_momentum_back(self):
        state = tensor(coherent_state(0.0, 0.0), coherent_state(0.0, 1.0))
        out = apply_symplectic(state, cv_cnot(0, 1, +1, 2))
        assert out.mean[1] == pytest.approx(-1.0)

    def test_rejects_equal_modes(self):
        with pytest.raises(IndexError):
            cv_cnot(0, 0, +1, 2)


class TestDftNetwork:
    def test_single_mode_is_identity(self):
        assert np.allclose(dft_network(1, 0, 1).matrix, np.eye(2))

    def test_two_modes_match_hadamard_blocks(self):
        # e^{i pi k l} is real, so x and p blocks are both [[1, 1], [1, -1]]/sqrt2
        t = dft_network(2, 0, 2)
        h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
        assert np.allclose(t.matrix[0::2, 0::2], h, atol=1e-14)
        assert np.allclose(t.matrix[1::2, 1::2], h, atol=1e-14)
        assert np.allclose(t.matrix[0::2, 1::2], 0.0, atol=1e-14)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_concentrates_equal_inputs_into_first_mode(self, n):
        beta = (0.8, -0.6)
        state = tensor(*[coherent_state(*beta) for _ in range(n)])
        out = apply_symplectic(state, dft_network(n, 0, n))
        assert np.allclose(out.mean[:2], np.sqrt(n) * np.array(beta), atol=1e-12)
        assert np.allclose(out.mean[2:], 0.0, atol=1e-12)

    def test_is_orthogonal(self):
        m = dft_network(5, 0, 5).matrix
        assert np.allclose(m @ m.T, np.eye(10), atol=1e-12)

    def test_preserves_mean_photon_number_proxy(self):
        rng = np.random.default_rng(7)
        state = tensor(*[coherent_state(*rng.normal(size=2)) for _ in range(4)])
        out = apply_symplectic(state, dft_network(4, 0, 4))

        def proxy(s):
            return np.sum(s.mean**2) + np.trace(s.cov) - s.n_modes

        assert proxy(out) == pytest.approx(proxy(state), abs=1e-10)


class TestSqueezer:
    def test_zero_parameter_is_identity(self):
        assert np.allclose(squeezer(0.0, 0, 1).matrix, np.eye(2))

    def test_squeezes_vacuum_variances(self):
        for r in (0.3, 1.0, 2.0):
            out = apply_symplectic(vacuum_state(1), squeezer(r, 0, 1))
            assert out.cov[0, 0] == pytest.approx(0.5 * np.exp(-2 * r), rel=1e-12)
            assert out.cov[1, 1] == pytest.approx(0.5 * np.exp(2 * r), rel=1e-12)

    def test_opposite_parameters_cancel(self):
        t = squeezer(0.8, 0, 1) @ squeezer(-0.8, 0, 1)
        assert np.allclose(t.matrix, np.eye(2), atol=1e-14)


def test_dft_range_validation():
    with pytest.raises(IndexError):
        dft_network(3, 1, 3)
    with pytest.raises(IndexError):
        dft_network(0, 0, 2)
