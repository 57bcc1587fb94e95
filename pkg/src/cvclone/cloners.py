"""Gaussian cloning machines and the analytic limits they saturate.

Three constructions are provided for duplicating one mode: a four-gate
C-NOT circuit (plus an ancilla-preparation gate), the amplifier-plus-beam-
splitter network, and a squeezed-family variant that conjugates the circuit
by squeezers.  The general many-to-many machine concentrates its inputs
with a DFT network, amplifies once and redistributes with a second DFT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .components import amplifier, beam_splitter_5050, cv_cnot, dft_network, squeezer
from .errors import DimensionError, InvalidNoise, InvalidShape
from .states import (
    GaussianChannel,
    GaussianState,
    SymplecticTransform,
    apply_symplectic,
    reduce_to_modes,
    state_overlap,
    vacuum_state,
)


@dataclass(frozen=True)
class ClonerBuild:
    """A cloning network plus the bookkeeping of which output mode is what."""

    transform: SymplecticTransform
    input_modes: tuple
    clone_modes: tuple
    anticlone_modes: tuple

    def __post_init__(self):
        object.__setattr__(self, "input_modes", tuple(self.input_modes))
        object.__setattr__(self, "clone_modes", tuple(self.clone_modes))
        object.__setattr__(self, "anticlone_modes", tuple(self.anticlone_modes))
        if set(self.clone_modes) & set(self.anticlone_modes):
            raise InvalidShape("clone and anticlone selections overlap")


@dataclass(frozen=True)
class CloneReport:
    """Per-clone excess noises and fidelities, plus the anticlone mean.

    Excess noise is measured against the covariance of the state being
    cloned (not against vacuum), so the same report applies to coherent
    and squeezed inputs.
    """

    clone_excess_x: tuple
    clone_excess_p: tuple
    fidelity: tuple
    anticlone_mean: tuple

    def to_json_dict(self) -> dict:
        return {
            "clone_excess_x": list(self.clone_excess_x),
            "clone_excess_p": list(self.clone_excess_p),
            "fidelity": list(self.fidelity),
            "anticlone_mean": list(self.anticlone_mean),
        }


def build_circuit_cloner() -> ClonerBuild:
    """One-to-two cloner as a gate sequence on (input, blank, ancilla).

    The blank/ancilla pair is first entangled by a C-NOT; the cloner itself
    is four C-NOTs: two controlled by the input that spread it onto the
    auxiliary modes, then two acting back on the input mode.  The sign of
    the final gate is the one that makes the output moments match the
    amplifier construction.
    """
    n = 3
    prep = cv_cnot(1, 2, +1, n)
    spread = cv_cnot(0, 2, +1, n) @ cv_cnot(0, 1, +1, n)
    collect = cv_cnot(1, 0, -1, n) @ cv_cnot(2, 0, +1, n)
    return ClonerBuild(
        transform=collect @ spread @ prep,
        input_modes=(0,),
        clone_modes=(0, 1),
        anticlone_modes=(2,),
    )


def canonical_cloner_transform() -> SymplecticTransform:
    """The optimal one-to-two map written directly in quadratures.

    a1' = a1 + a2/sqrt2 + a3^dag/sqrt2, a2' = a1 - a2/sqrt2 + a3^dag/sqrt2,
    a3' = a1^dag + sqrt2 a3, with modes (input, blank, ancilla).
    """
    r = 1.0 / np.sqrt(2.0)
    s2 = np.sqrt(2.0)
    s = np.array(
        [
            [1, 0, r, 0, r, 0],
            [0, 1, 0, r, 0, -r],
            [1, 0, -r, 0, r, 0],
            [0, 1, 0, -r, 0, -r],
            [1, 0, 0, 0, s2, 0],
            [0, -1, 0, 0, 0, s2],
        ],
        dtype=float,
    )
    return SymplecticTransform(s)


def build_amplifier_cloner(gain: float = 2.0) -> ClonerBuild:
    """One-to-two cloner as amplifier (gain 2) followed by a 50:50 splitter.

    ``gain`` exists only as a fault-injection hook for the verification
    harness; any value other than 2 breaks the construction on purpose.
    """
    n = 3
    transform = beam_splitter_5050(0, 1, n) @ amplifier(gain, 0, 2, n)
    return ClonerBuild(
        transform=transform,
        input_modes=(0,),
        clone_modes=(0, 1),
        anticlone_modes=(2,),
    )


def build_ntom(n: int, m: int) -> ClonerBuild:
    """N-to-M cloner: concentrate by DFT, amplify at gain M/N, redistribute.

    Uses m + 1 modes: clones on 0..m-1 and the amplifier idler on mode m.
    On N identical coherent inputs every clone keeps the input mean and
    gains 1/N - 1/M of excess noise per quadrature.
    """
    if n < 1 or m < n:
        raise InvalidShape(f"need 1 <= N <= M, got N={n}, M={m}")
    total = m + 1
    concentrate = dft_network(n, 0, total)
    amplify = amplifier(m / n, 0, m, total)
    distribute = dft_network(m, 0, total)
    return ClonerBuild(
        transform=distribute @ amplify @ concentrate,
        input_modes=tuple(range(n)),
        clone_modes=tuple(range(m)),
        anticlone_modes=(m,),
    )


def squeezed_family_cloner(r: float) -> ClonerBuild:
    """Cloner matched to the family of states squeezed by r.

    Unsqueezes the input, runs the rotation-covariant circuit, then
    squeezes both clones back.  Copies every member of the matched family
    (any displacement, fixed r) with the same fidelity as the coherent
    cloner copies coherent states.
    """
    base = build_circuit_cloner()
    pre = squeezer(-r, 0, 3)
    post = squeezer(r, 1, 3) @ squeezer(r, 0, 3)
    return ClonerBuild(
        transform=post @ base.transform @ pre,
        input_modes=base.input_modes,
        clone_modes=base.clone_modes,
        anticlone_modes=base.anticlone_modes,
    )


def _check_counts(n, m, allow_inf=False):
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise InvalidShape(f"need an integer N >= 1, got N={n}")
    if m == math.inf:
        if not allow_inf:
            raise InvalidShape("M must be finite here")
        return
    if not (isinstance(m, (int, np.integer)) and m >= n):
        raise InvalidShape(f"need 1 <= N <= M, got N={n}, M={m}")


def variance_bound(n: int, m) -> float:
    """Minimum cloning-induced noise variance 1/N - 1/M (M may be math.inf)."""
    _check_counts(n, m, allow_inf=True)
    return 1.0 / n - (0.0 if m == math.inf else 1.0 / m)


def fidelity_bound(n: int, m) -> float:
    """Maximum coherent-state cloning fidelity MN / (MN + M - N)."""
    _check_counts(n, m, allow_inf=True)
    if m == math.inf:
        return n / (n + 1.0)
    return (m * n) / (m * n + m - n)


def concatenation_gap(n: int, m, l) -> float:
    """Slack in the cloner-concatenation inequality at the optimal variances.

    Returns sigma2(N,M) + sigma2(M,L) - sigma2(N,L); the 1/N - 1/M family
    telescopes, so the gap is identically zero.
    """
    _check_counts(n, m, allow_inf=True)
    if m == math.inf:
        if l != math.inf:
            raise InvalidShape("L must be infinite when M is")
        return 0.0
    _check_counts(m, l, allow_inf=True)
    return variance_bound(n, m) + variance_bound(m, l) - variance_bound(n, l)


def asymmetric_clone_channels(delta_nb2: float):
    """Channel pair of the asymmetric cloner that saturates the noise product.

    Bob's channel adds isotropic noise ``delta_nb2`` per quadrature, Eve's
    adds ``1/(4 delta_nb2)``, so the product of the two noise variances is
    exactly 1/4.
    """
    if not np.isfinite(delta_nb2) or delta_nb2 <= 0.0:
        raise InvalidNoise(f"noise variance must be > 0, got {delta_nb2}")
    eye = np.eye(2)
    channel_b = GaussianChannel(eye, delta_nb2 * eye)
    channel_e = GaussianChannel(eye, (0.25 / delta_nb2) * eye)
    return channel_b, channel_e


def _embed_input(build: ClonerBuild, input_state: GaussianState) -> GaussianState:
    total = build.transform.n_modes
    full = vacuum_state(total)
    mean = full.mean.copy()
    cov = full.cov.copy()
    idx = np.array(
        [q for mode in build.input_modes for q in (2 * mode, 2 * mode + 1)], dtype=int
    )
    mean[idx] = input_state.mean
    cov[np.ix_(idx, idx)] = input_state.cov
    return GaussianState(mean, cov)


def clone_output_state(build: ClonerBuild, input_state: GaussianState) -> GaussianState:
    """Full multimode output state of a cloner run (clones plus anticlone).

    The input occupies ``build.input_modes``; all other modes start in
    vacuum.
    """
    if input_state.n_modes != len(build.input_modes):
        raise DimensionError(
            f"input has {input_state.n_modes} modes, build expects {len(build.input_modes)}"
        )
    return apply_symplectic(_embed_input(build, input_state), build.transform)


def run_cloner(build: ClonerBuild, input_state: GaussianState) -> CloneReport:
    """Run a cloner on an input state and summarise each clone.

    The input occupies ``build.input_modes`` (identical replicas for the
    many-input machines); the remaining modes start in vacuum.  Fidelities
    are overlaps with the single-copy input marginal, meaningful when the
    input is pure.
    """
    reference = reduce_to_modes(input_state, [0])
    output = clone_output_state(build, input_state)

    excess_x, excess_p, fidelities = [], [], []
    for mode in build.clone_modes:
        clone = reduce_to_modes(output, [mode])
        excess_x.append(float(clone.cov[0, 0] - reference.cov[0, 0]))
        excess_p.append(float(clone.cov[1, 1] - reference.cov[1, 1]))
        fidelities.append(state_overlap(reference, clone))
    anticlone = reduce_to_modes(output, [build.anticlone_modes[0]])
    return CloneReport(
        clone_excess_x=tuple(excess_x),
        clone_excess_p=tuple(excess_p),
        fidelity=tuple(fidelities),
        anticlone_mean=tuple(anticlone.mean.tolist()),
    )
