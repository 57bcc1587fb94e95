"""Self-check suite: every structural and physical invariant in one sweep.

Each check returns a row (name, passed, detail); the detail string carries
the worst observed deviation so regressions are visible in the output.
All randomness is drawn from one seeded generator in a fixed order, which
makes the whole report byte-reproducible for a given seed.
"""

from __future__ import annotations

import numpy as np

from .cloners import (
    asymmetric_clone_channels,
    build_amplifier_cloner,
    build_circuit_cloner,
    build_ntom,
    canonical_cloner_transform,
    fidelity_bound,
    run_cloner,
    squeezed_family_cloner,
    variance_bound,
)
from .components import (
    amplifier,
    beam_splitter_5050,
    cv_cnot,
    dft_network,
    phase_rotation,
    squeezer,
)
from .measurement import estimate_mean_var, joint_measure_sample
from .qkd import exclusion_check
from .states import (
    GaussianState,
    apply_symplectic,
    coherent_state,
    squeezed_state,
    symplectic_form,
    tensor,
    validate_uncertainty,
)


def random_one_mode_state(rng: np.random.Generator) -> GaussianState:
    """Random valid single-mode Gaussian state (rotated squeezed thermal)."""
    theta = rng.uniform(0.0, np.pi)
    r = rng.uniform(0.0, 1.0)
    nu = rng.uniform(0.5, 2.0)
    rot = np.array([[np.cos(theta), np.sin(theta)], [-np.sin(theta), np.cos(theta)]])
    cov = rot @ np.diag([nu * np.exp(-2 * r), nu * np.exp(2 * r)]) @ rot.T
    return GaussianState(rng.normal(0.0, 2.0, size=2), cov)


def _library_transforms(n_modes: int = 3):
    yield beam_splitter_5050(0, 1, n_modes)
    yield amplifier(1.5, 0, 2, n_modes)
    yield amplifier(2.0, 0, 2, n_modes)
    yield amplifier(3.0, 1, 2, n_modes)
    yield cv_cnot(0, 1, +1, n_modes)
    yield cv_cnot(2, 0, -1, n_modes)
    yield squeezer(0.7, 1, n_modes)
    yield phase_rotation(0.3, 0, n_modes)
    for m in (1, 2, 3):
        yield dft_network(m, 0, n_modes)


def _check_symplectic_factories():
    worst = 0.0
    for t in _library_transforms():
        omega = symplectic_form(t.n_modes)
        worst = max(worst, float(np.abs(t.matrix @ omega @ t.matrix.T - omega).max()))
    for m in range(1, 7):
        t = dft_network(m, 0, m)
        omega = symplectic_form(m)
        worst = max(worst, float(np.abs(t.matrix @ omega @ t.matrix.T - omega).max()))
    return worst <= 1e-10, f"max |S Omega S^T - Omega| = {worst:.12g}"


def _check_uncertainty_preserved(rng):
    ok = True
    transforms = list(_library_transforms())
    for _ in range(50):
        state = random_one_mode_state(rng)
        full = GaussianState(
            np.concatenate([state.mean, np.zeros(4)]),
            np.block(
                [[state.cov, np.zeros((2, 4))], [np.zeros((4, 2)), 0.5 * np.eye(4)]]
            ),
        )
        t = transforms[rng.integers(0, len(transforms))]
        ok = ok and validate_uncertainty(apply_symplectic(full, t))
    return ok, "50 random states through random library transforms"


def _check_composition(rng):
    worst = 0.0
    transforms = list(_library_transforms())
    for _ in range(25):
        t1 = transforms[rng.integers(0, len(transforms))]
        t2 = transforms[rng.integers(0, len(transforms))]
        state = random_one_mode_state(rng)
        full = GaussianState(
            np.concatenate([state.mean, np.zeros(4)]),
            np.block(
                [[state.cov, np.zeros((2, 4))], [np.zeros((4, 2)), 0.5 * np.eye(4)]]
            ),
        )
        two_step = apply_symplectic(apply_symplectic(full, t1), t2)
        one_step = apply_symplectic(full, t2 @ t1)
        worst = max(
            worst,
            float(np.abs(two_step.mean - one_step.mean).max()),
            float(np.abs(two_step.cov - one_step.cov).max()),
        )
    return worst <= 1e-10, f"max composed-vs-sequential deviation = {worst:.12g}"


def _check_construction_equivalence(rng, break_gain=None):
    circuit = build_circuit_cloner()
    amp = build_amplifier_cloner() if break_gain is None else build_amplifier_cloner(break_gain)
    worst = 0.0
    for _ in range(100):
        state = random_one_mode_state(rng)
        rep_c = run_cloner(circuit, state)
        rep_a = run_cloner(amp, state)
        worst = max(
            worst,
            float(np.abs(np.array(rep_c.clone_excess_x) - np.array(rep_a.clone_excess_x)).max()),
            float(np.abs(np.array(rep_c.clone_excess_p) - np.array(rep_a.clone_excess_p)).max()),
            float(np.abs(np.array(rep_c.fidelity) - np.array(rep_a.fidelity)).max()),
        )
    return worst <= 1e-10, f"max clone-moment deviation over 100 inputs = {worst:.12g}"


def _check_canonical_matrix(break_gain=None):
    amp = build_amplifier_cloner() if break_gain is None else build_amplifier_cloner(break_gain)
    dev = float(np.abs(amp.transform.matrix - canonical_cloner_transform().matrix).max())
    return dev <= 1e-12, f"max |composite - canonical| = {dev:.12g}"


def _check_ntom_saturation():
    worst_var, worst_fid = 0.0, 0.0
    for n in range(1, 5):
        for m in range(n, 7):
            report = run_cloner(build_ntom(n, m), _replicated_coherent(n, 0.7, -0.3))
            bound_var = variance_bound(n, m)
            bound_fid = fidelity_bound(n, m)
            for ex, ep, f in zip(
                report.clone_excess_x, report.clone_excess_p, report.fidelity
            ):
                worst_var = max(worst_var, abs(ex - bound_var), abs(ep - bound_var))
                worst_fid = max(worst_fid, abs(f - bound_fid))
    ok = worst_var <= 1e-10 and worst_fid <= 1e-10
    return ok, f"max |excess - bound| = {worst_var:.12g}, max |F - bound| = {worst_fid:.12g}"


def _replicated_coherent(n, x, p):
    return tensor(*[coherent_state(x, p) for _ in range(n)])


def single_input_builds():
    """Cloner builds acting on a single input copy, for the product checks."""
    builds = [build_circuit_cloner(), build_amplifier_cloner()]
    builds += [squeezed_family_cloner(r) for r in (0.5, 1.0, 2.0)]
    builds += [build_ntom(1, m) for m in range(2, 7)]
    return builds


def _check_no_cloning_products():
    worst = np.inf
    for build in single_input_builds():
        report = run_cloner(build, coherent_state(0.4, -1.1))
        ex = np.sqrt(np.maximum(report.clone_excess_x, 0.0))
        ep = np.sqrt(np.maximum(report.clone_excess_p, 0.0))
        worst = min(worst, float(ex[0] * ep[1]), float(ex[1] * ep[0]))
    for delta in np.linspace(0.05, 5.0, 50):
        channel_b, channel_e = asymmetric_clone_channels(float(delta))
        prod = np.sqrt(channel_b.noise[0, 0]) * np.sqrt(channel_e.noise[1, 1])
        worst = min(worst, float(prod))
    return worst >= 0.5 - 1e-9, f"min excess-noise product = {worst:.12g}"


def _check_anticlone():
    report = run_cloner(build_circuit_cloner(), coherent_state(1.3, -0.8))
    dev = max(
        abs(report.anticlone_mean[0] - 1.3), abs(report.anticlone_mean[1] - 0.8)
    )
    return dev <= 1e-12, f"anticlone mean deviation from (x, -p) = {dev:.12g}"


def _check_exclusion_grid():
    worst_gap = 0.0
    min_subopt = np.inf
    for v in np.linspace(0.05, 0.45, 20):
        for delta in np.linspace(0.05, 5.0, 20):
            worst_gap = max(worst_gap, abs(exclusion_check(float(v), float(delta)).gap))
            subopt = exclusion_check(float(v), float(delta), 2.0 * 0.25 / float(delta))
            min_subopt = min(min_subopt, subopt.gap)
    ok = worst_gap <= 1e-12 and min_subopt > 0.0
    return ok, f"max |gap| = {worst_gap:.12g}, min suboptimal gap = {min_subopt:.12g}"


def _check_arthurs_kelly(seed):
    state = coherent_state(1.5, -0.7)
    bx, bp = joint_measure_sample(state, 100_000, seed)
    ok = True
    detail = []
    for name, batch in (("X", bx), ("P", bp)):
        _, var, se = estimate_mean_var(batch)
        ok = ok and abs(var - 1.0) <= 3.0 * se
        detail.append(f"Var {name} = {var:.12g} (se {se:.12g})")
    return ok, "; ".join(detail)


def _check_squeezed_family():
    worst = 0.0
    for r in (0.5, 1.0, 2.0):
        matched = run_cloner(squeezed_family_cloner(r), squeezed_state(r, 0.6, -0.2))
        worst = max(worst, abs(matched.fidelity[0] - 2.0 / 3.0))
        mismatched = run_cloner(build_circuit_cloner(), squeezed_state(r))
        expected = 1.0 / np.sqrt(1.25 + np.cosh(2.0 * r))
        worst = max(worst, abs(mismatched.fidelity[0] - expected))
    return worst <= 1e-10, f"max fidelity deviation = {worst:.12g}"


def run_verification(seed: int, break_gain: float | None = None):
    """Run every invariant check; returns (rows, all_passed)."""
    rng = np.random.default_rng(seed)
    rows = [
        ("symplectic-factories", *_check_symplectic_factories()),
        ("uncertainty-preservation", *_check_uncertainty_preserved(rng)),
        ("composition-consistency", *_check_composition(rng)),
        ("circuit-amplifier-equivalence", *_check_construction_equivalence(rng, break_gain)),
        ("canonical-matrix-match", *_check_canonical_matrix(break_gain)),
        ("ntom-bound-saturation", *_check_ntom_saturation()),
        ("no-cloning-products", *_check_no_cloning_products()),
        ("anticlone-mean", *_check_anticlone()),
        ("information-exclusion-grid", *_check_exclusion_grid()),
        ("arthurs-kelly-sampling", *_check_arthurs_kelly(seed)),
        ("squeezed-family-fidelity", *_check_squeezed_family()),
    ]
    rows = [(name, bool(ok), detail) for name, ok, detail in rows]
    return rows, all(ok for _, ok, _ in rows)
