import numpy as np
import pytest

from cvclone import (
    GaussianState,
    InvalidState,
    SampleBatch,
    coherent_state,
    estimate_mean_var,
    homodyne_sample,
    joint_measure_sample,
    vacuum_state,
)
from cvclone.measurement import write_batch_csv
from cvclone.verify import random_one_mode_state


class TestHomodyne:
    def test_vacuum_x_variance(self):
        batch = homodyne_sample(vacuum_state(1), "x", 100_000, seed=101)
        _, var, se = estimate_mean_var(batch)
        assert abs(var - 0.5) <= 3 * se

    def test_coherent_mean_recovery(self):
        batch = homodyne_sample(coherent_state(2.0, 0.0), "x", 100_000, seed=102)
        mean, var, _ = estimate_mean_var(batch)
        assert abs(mean - 2.0) <= 3 * np.sqrt(var / batch.count)

    def test_clone_output_p_variance(self):
        clone = GaussianState(np.zeros(2), np.eye(2))
        batch = homodyne_sample(clone, "p", 100_000, seed=103)
        _, var, se = estimate_mean_var(batch)
        assert abs(var - 1.0) <= 3 * se

    def test_identical_seeds_are_bit_exact(self):
        a = homodyne_sample(vacuum_state(1), "x", 1000, seed=7)
        b = homodyne_sample(vacuum_state(1), "x", 1000, seed=7)
        assert np.array_equal(a.values, b.values)

    def test_rejects_bad_quadrature_and_state(self):
        with pytest.raises(InvalidState):
            homodyne_sample(vacuum_state(1), "y", 10, seed=1)
        bad = GaussianState(np.zeros(2), np.diag([0.1, 0.1]))
        with pytest.raises(InvalidState):
            homodyne_sample(bad, "x", 10, seed=1)


class TestJointMeasurement:
    def test_coherent_state_pays_the_minimum_penalty(self):
        bx, bp = joint_measure_sample(coherent_state(0.7, -0.3), 100_000, seed=201)
        for batch in (bx, bp):
            _, var, se = estimate_mean_var(batch)
            assert abs(var - 1.0) <= 3 * se

    def test_clone_output_total_variance(self):
        clone = GaussianState(np.zeros(2), np.eye(2))
        bx, _ = joint_measure_sample(clone, 100_000, seed=202)
        _, var, se = estimate_mean_var(bx)
        assert abs(var - 1.5) <= 3 * se

    def test_mean_recovery(self):
        bx, bp = joint_measure_sample(coherent_state(1.5, -0.7), 200_000, seed=203)
        mx, vx, _ = estimate_mean_var(bx)
        mp_, vp, _ = estimate_mean_var(bp)
        assert abs(mx - 1.5) <= 3 * np.sqrt(vx / bx.count)
        assert abs(mp_ + 0.7) <= 3 * np.sqrt(vp / bp.count)

    def test_identical_seeds_are_bit_exact(self):
        a = joint_measure_sample(coherent_state(0.1, 0.2), 500, seed=11)
        b = joint_measure_sample(coherent_state(0.1, 0.2), 500, seed=11)
        assert np.array_equal(a[0].values, b[0].values)
        assert np.array_equal(a[1].values, b[1].values)

    def test_excess_is_half_unit_for_random_states(self):
        rng = np.random.default_rng(31)
        for k in range(50):
            state = random_one_mode_state(rng)
            bx, _ = joint_measure_sample(state, 20_000, seed=300 + k)
            _, var, se = estimate_mean_var(bx)
            assert abs(var - state.cov[0, 0] - 0.5) <= 3 * se

    def test_averaging_replicas_reaches_one_over_n(self):
        # averaging N independent joint outcomes on N identical coherent
        # states leaves noise variance 1/N
        n, groups = 4, 50_000
        outcomes = np.stack(
            [
                joint_measure_sample(coherent_state(0.9, 0.1), groups, seed=400 + k)[0].values
                for k in range(n)
            ]
        )
        averaged = outcomes.mean(axis=0)
        var = averaged.var(ddof=1)
        se = var * np.sqrt(2.0 / groups)
        assert abs(var - 1.0 / n) <= 3 * se


class TestEstimator:
    def test_constant_batch_has_zero_variance(self):
        _, var, _ = estimate_mean_var(SampleBatch(np.full(100, 1.5), seed=0))
        assert var == 0.0

    def test_standard_normal_self_check(self):
        rng = np.random.default_rng(55)
        batch = SampleBatch(rng.standard_normal(100_000), seed=55)
        _, var, se = estimate_mean_var(batch)
        assert abs(var - 1.0) <= 3 * se

    def test_pooled_batches_are_consistent(self):
        a = homodyne_sample(vacuum_state(1), "x", 50_000, seed=61)
        b = homodyne_sample(vacuum_state(1), "x", 50_000, seed=62)
        pooled = SampleBatch(np.concatenate([a.values, b.values]), seed=61)
        _, var, se = estimate_mean_var(pooled)
        assert abs(var - 0.5) <= 3 * se

    def test_requires_two_samples(self):
        with pytest.raises(InvalidState):
            estimate_mean_var(SampleBatch(np.array([1.0]), seed=0))


def test_batch_csv_export(tmp_path):
    batch = homodyne_sample(vacuum_state(1), "x", 5, seed=77)
    path = tmp_path / "batch.csv"
    write_batch_csv(batch, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "value"
    assert len(lines) == 6
    assert float(lines[1]) == pytest.approx(batch.values[0], rel=1e-10)
