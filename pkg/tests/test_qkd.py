import numpy as np
import pytest

from cvclone import (
    InvalidNoise,
    InvalidState,
    InvalidVariance,
    NoSqueezing,
    ProtocolParams,
    estimate_excess_noise,
    exclusion_check,
    info_ab,
    info_ae,
    max_key_rate,
    shannon_info,
    simulate_protocol,
)
from cvclone.qkd import write_transcript_csv


class TestShannonInfo:
    def test_unit_snr_is_half_bit(self):
        assert shannon_info(0.5, 0.5) == pytest.approx(0.5)

    def test_snr_three_is_one_bit(self):
        assert shannon_info(3.0, 1.0) == pytest.approx(1.0)

    def test_vanishing_signal_limit(self):
        assert shannon_info(1e-12, 1.0) == pytest.approx(0.0, abs=1e-11)

    def test_rejects_nonpositive_variances(self):
        with pytest.raises(InvalidVariance):
            shannon_info(0.0, 1.0)
        with pytest.raises(InvalidVariance):
            shannon_info(1.0, -0.1)


class TestMaxKeyRate:
    def test_quarter_vacuum_gives_one_bit(self):
        assert max_key_rate(0.25) == pytest.approx(1.0)

    def test_eighth_vacuum_gives_two_bits(self):
        assert max_key_rate(0.125) == pytest.approx(2.0)

    def test_vacuum_limit_gives_zero(self):
        assert max_key_rate(0.5 - 1e-12) == pytest.approx(0.0, abs=1e-11)

    def test_rejects_unsqueezed_variance(self):
        with pytest.raises(NoSqueezing):
            max_key_rate(0.5)
        with pytest.raises(NoSqueezing):
            max_key_rate(0.6)


class TestChannelInformation:
    def test_hand_evaluated_point(self):
        assert info_ab(0.25, 0.5) == pytest.approx(0.5, abs=1e-12)

    def test_noiseless_channel_reaches_key_rate(self):
        for v in (0.1, 0.25, 0.4):
            assert info_ab(v, 0.0) == pytest.approx(max_key_rate(v), abs=1e-12)

    def test_infinite_noise_kills_information(self):
        assert info_ab(0.25, 1e9) == pytest.approx(0.0, abs=1e-8)

    def test_eve_uses_the_same_formula(self):
        assert info_ae(0.25, 0.5) == info_ab(0.25, 0.5)

    def test_rejects_negative_noise(self):
        with pytest.raises(InvalidNoise):
            info_ab(0.25, -0.1)


class TestExclusion:
    def test_spot_values(self):
        report = exclusion_check(0.25, 0.5)
        assert (report.i, report.i_ab, report.i_ae) == pytest.approx((1.0, 0.5, 0.5))
        assert abs(report.gap) <= 1e-12

    def test_suboptimal_eve_leaves_positive_gap(self):
        report = exclusion_check(0.25, 0.5, delta_ne2=1.0)
        assert report.gap > 0.0

    def test_vanishing_bob_noise_gives_bob_everything(self):
        report = exclusion_check(0.25, 1e-9)
        assert report.i_ab == pytest.approx(report.i, abs=1e-6)
        assert report.i_ae == pytest.approx(0.0, abs=1e-6)

    def test_saturating_grid_gap_vanishes(self):
        for v in np.linspace(0.05, 0.45, 20):
            for delta in np.linspace(0.05, 5.0, 20):
                report = exclusion_check(float(v), float(delta))
                assert abs(report.gap) <= 1e-12
                loose = exclusion_check(float(v), float(delta), 2 * 0.25 / float(delta))
                assert loose.gap > 0.0

    def test_security_threshold_matches_bob_advantage(self):
        # under saturation: I_AB >= I/2 exactly when I_AB >= I_AE
        for v in np.linspace(0.05, 0.45, 20):
            for delta in np.linspace(0.05, 5.0, 20):
                report = exclusion_check(float(v), float(delta))
                assert (report.i_ab >= report.i / 2) == (report.i_ab >= report.i_ae)


class TestIndistinguishability:
    def test_emitted_mixtures_share_variance_pairs(self):
        for v in (0.05, 0.125, 0.25, 0.4):
            big_v = ProtocolParams(v=v, n_rounds=1, seed=0).displacement_variance
            x_encoding = (big_v + v, 1.0 / (4.0 * v))
            p_encoding = (1.0 / (4.0 * v), big_v + v)
            assert x_encoding[0] == pytest.approx(p_encoding[1], rel=1e-14)
            assert x_encoding[1] == pytest.approx(p_encoding[0], rel=1e-14)
            assert big_v + v == pytest.approx(1.0 / (4.0 * v), rel=1e-14)


class TestSimulation:
    def test_clean_channel_statistics(self):
        params = ProtocolParams(v=0.25, n_rounds=200_000, seed=404)
        records, report = simulate_protocol(params)
        assert abs(report.empirical_noise_var - 0.25) <= 3 * report.stderr_noise_var
        assert abs(report.empirical_i_ab - 1.0) <= 3 * report.stderr_i_ab
        n = len(records)
        sift_se = np.sqrt(0.25 / n)
        assert abs(report.empirical_sift_fraction - 0.5) <= 3 * sift_se

    def test_attacked_channel_statistics(self):
        params = ProtocolParams(v=0.25, n_rounds=200_000, seed=405)
        _, report = simulate_protocol(params, attack_delta_nb2=0.5)
        assert abs(report.empirical_noise_var - 0.75) <= 3 * report.stderr_noise_var
        assert abs(report.empirical_i_ab - 0.5) <= 3 * report.stderr_i_ab
        assert report.i_ab == pytest.approx(0.5)
        assert report.i_ae == pytest.approx(0.5)

    def test_second_attack_configuration(self):
        params = ProtocolParams(v=0.125, n_rounds=200_000, seed=406)
        _, report = simulate_protocol(params, attack_delta_nb2=0.25)
        assert abs(report.empirical_i_ab - report.i_ab) <= 3 * report.stderr_i_ab

    def test_empirical_tracks_analytic_over_seeds(self):
        for seed in range(10):
            params = ProtocolParams(v=0.25, n_rounds=50_000, seed=seed)
            _, report = simulate_protocol(params, attack_delta_nb2=0.5)
            assert abs(report.empirical_i_ab - report.i_ab) <= 3 * report.stderr_i_ab

    def test_identical_seeds_reproduce_the_transcript(self):
        params = ProtocolParams(v=0.25, n_rounds=500, seed=42)
        records_a, _ = simulate_protocol(params, attack_delta_nb2=0.5)
        records_b, _ = simulate_protocol(params, attack_delta_nb2=0.5)
        assert records_a == records_b

    def test_kept_flag_matches_basis_agreement(self):
        params = ProtocolParams(v=0.25, n_rounds=2_000, seed=9)
        records, _ = simulate_protocol(params)
        for rec in records:
            assert rec.kept == (rec.alice_basis == rec.bob_basis)

    def test_rejects_unsqueezed_variance(self):
        with pytest.raises(NoSqueezing):
            ProtocolParams(v=0.6, n_rounds=10, seed=0)


class TestNoiseEstimation:
    def _disclosed(self, attack, seed, v=0.25, rounds=50_000):
        params = ProtocolParams(v=v, n_rounds=rounds, seed=seed)
        records, _ = simulate_protocol(params, attack_delta_nb2=attack)
        return [(r.r, r.r_prime) for r in records if r.kept]

    def test_recovers_injected_noise(self):
        pairs = self._disclosed(0.5, seed=21)
        delta_hat, _ = estimate_excess_noise(pairs, 0.25)
        se = 0.75 * np.sqrt(2.0 / len(pairs))
        assert abs(delta_hat - 0.5) <= 3 * se

    def test_clean_channel_estimates_zero(self):
        pairs = self._disclosed(None, seed=22)
        delta_hat, bound = estimate_excess_noise(pairs, 0.25)
        se = 0.25 * np.sqrt(2.0 / len(pairs))
        assert delta_hat <= 3 * se
        assert bound <= 0.01

    def test_bound_matches_saturating_eve(self):
        pairs = self._disclosed(0.5, seed=23, rounds=200_000)
        _, bound = estimate_excess_noise(pairs, 0.25)
        assert bound == pytest.approx(0.5, abs=0.02)

    def test_requires_hundred_pairs(self):
        with pytest.raises(InvalidState):
            estimate_excess_noise([(0.0, 0.0)] * 99, 0.25)


def test_transcript_csv_round_trip(tmp_path):
    params = ProtocolParams(v=0.25, n_rounds=50, seed=5)
    records, _ = simulate_protocol(params)
    path = tmp_path / "transcript.csv"
    write_transcript_csv(records, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "round,alice_basis,r,bob_basis,r_prime,kept"
    assert len(lines) == 51
    first = lines[1].split(",")
    assert first[1] in ("x", "p") and first[5] in ("0", "1")


def test_info_report_json_keys():
    payload = exclusion_check(0.25, 0.5).to_json_dict()
    assert set(payload) == {"i", "i_ab", "i_ae", "gap"}
    _, report = simulate_protocol(ProtocolParams(v=0.25, n_rounds=2_000, seed=1))
    payload = report.to_json_dict()
    assert {"i", "i_ab", "i_ae", "gap", "empirical_i_ab", "stderr_i_ab"} <= set(payload)
