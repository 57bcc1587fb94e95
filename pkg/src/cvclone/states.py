"""Gaussian states of n bosonic modes and the maps that evolve them.

Conventions used everywhere in this package:

* quadrature ordering is mode-interleaved, ``(x1, p1, x2, p2, ...)``;
* ``hbar = 1``, so the vacuum has variance 1/2 in each quadrature;
* a coherent amplitude is ``alpha = (x + i p) / sqrt(2)``;
* the symplectic form ``Omega`` is block diagonal with 2x2 blocks
  ``[[0, 1], [-1, 0]]``.

States, transforms and channels are immutable value objects; every
operation returns a new object, so everything here is safe to use
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidChannel, InvalidState

#: structural identities (symplectic check, composition)
SYMPLECTIC_ATOL = 1e-10
#: physical positivity (uncertainty, complete positivity)
POSITIVITY_TOL = 1e-9


def symplectic_form(n_modes: int) -> np.ndarray:
    """Return the 2n x 2n symplectic form in interleaved ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _check_symmetric(m: np.ndarray, what: str) -> np.ndarray:
    tol = 1e-12 * max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > tol:
        raise InvalidState(f"{what} is not symmetric")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class GaussianState:
    """An n-mode Gaussian state: mean quadrature vector plus covariance.

    ``mean`` has length 2n in interleaved ordering and ``cov`` is the
    real symmetric 2n x 2n quadrature covariance matrix.  Symmetry is
    enforced at construction; physicality (the uncertainty relation) is
    checked separately by :func:`validate_uncertainty` so that
    deliberately unphysical matrices can still be inspected.
    """

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.asarray(self.cov, dtype=float)
        if mean.ndim != 1 or mean.size == 0 or mean.size % 2 != 0:
            raise DimensionError("mean must be a vector of even length 2n")
        if cov.shape != (mean.size, mean.size):
            raise DimensionError(
                f"covariance shape {cov.shape} does not match mean length {mean.size}"
            )
        cov = _check_symmetric(cov, "covariance matrix")
        object.__setattr__(self, "mean", _freeze(mean))
        object.__setattr__(self, "cov", _freeze(cov))

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    def to_json_dict(self) -> dict:
        """JSON form with keys n_modes, mean, cov (row-major)."""
        return {
            "n_modes": self.n_modes,
            "mean": self.mean.tolist(),
            "cov": self.cov.ravel().tolist(),
        }


@dataclass(frozen=True)
class SymplecticTransform:
    """A linear phase-space map ``r -> matrix @ r + shift``.

    The matrix must preserve the symplectic form to within
    ``SYMPLECTIC_ATOL`` entrywise; this guarantees all commutators are
    conserved, so the map represents a lossless optical circuit.
    """

    matrix: np.ndarray
    shift: np.ndarray | None = None

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] % 2:
            raise DimensionError("matrix must be square with even dimension 2n")
        shift = self.shift
        shift = np.zeros(matrix.shape[0]) if shift is None else np.asarray(shift, dtype=float)
        if shift.shape != (matrix.shape[0],):
            raise DimensionError("shift length must match matrix dimension")
        omega = symplectic_form(matrix.shape[0] // 2)
        dev = np.abs(matrix @ omega @ matrix.T - omega).max()
        if dev > SYMPLECTIC_ATOL:
            raise InvalidState(f"matrix is not symplectic (deviation {dev:.3e})")
        object.__setattr__(self, "matrix", _freeze(matrix))
        object.__setattr__(self, "shift", _freeze(shift))

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2

    def __matmul__(self, other: "SymplecticTransform") -> "SymplecticTransform":
        """Composition ``self after other`` (matrix-product convention)."""
        if not isinstance(other, SymplecticTransform):
            return NotImplemented
        if self.n_modes != other.n_modes:
            raise DimensionError("cannot compose transforms on different mode counts")
        return SymplecticTransform(
            self.matrix @ other.matrix, self.matrix @ other.shift + self.shift
        )


@dataclass(frozen=True)
class GaussianChannel:
    """An affine noisy map: ``mean -> gain @ mean``, ``cov -> gain cov gain^T + noise``.

    Complete positivity requires ``noise + (i/2)(Omega - gain Omega gain^T)``
    to have no eigenvalue below ``-POSITIVITY_TOL``.
    """

    gain: np.ndarray
    noise: np.ndarray

    def __post_init__(self):
        gain = np.asarray(self.gain, dtype=float)
        noise = np.asarray(self.noise, dtype=float)
        if gain.ndim != 2 or gain.shape[0] != gain.shape[1] or gain.shape[0] % 2:
            raise DimensionError("gain must be square with even dimension 2n")
        if noise.shape != gain.shape:
            raise DimensionError("noise shape must match gain shape")
        tol = 1e-12 * max(1.0, float(np.abs(noise).max(initial=0.0)))
        if np.abs(noise - noise.T).max(initial=0.0) > tol:
            raise InvalidChannel("noise matrix is not symmetric")
        noise = 0.5 * (noise + noise.T)
        omega = symplectic_form(gain.shape[0] // 2)
        herm = noise + 0.5j * (omega - gain @ omega @ gain.T)
        low = np.linalg.eigvalsh(herm).min()
        if low < -POSITIVITY_TOL:
            raise InvalidChannel(f"channel is not completely positive (eigenvalue {low:.3e})")
        object.__setattr__(self, "gain", _freeze(gain))
        object.__setattr__(self, "noise", _freeze(noise))

    @property
    def n_modes(self) -> int:
        return self.gain.shape[0] // 2


# ---------------------------------------------------------------------------
# state factories
# ---------------------------------------------------------------------------

def vacuum_state(n_modes: int = 1) -> GaussianState:
    """n-mode vacuum: zero mean, covariance I/2."""
    if n_modes < 1:
        raise DimensionError("need at least one mode")
    return GaussianState(np.zeros(2 * n_modes), 0.5 * np.eye(2 * n_modes))


def coherent_state(x: float, p: float) -> GaussianState:
    """Single-mode coherent state with quadrature means (x, p)."""
    return GaussianState(np.array([x, p], dtype=float), 0.5 * np.eye(2))


def squeezed_state(r: float, x: float = 0.0, p: float = 0.0) -> GaussianState:
    """Single-mode squeezed state, x-variance exp(-2r)/2, p-variance exp(2r)/2."""
    cov = np.diag([0.5 * np.exp(-2.0 * r), 0.5 * np.exp(2.0 * r)])
    return GaussianState(np.array([x, p], dtype=float), cov)


def tensor(*states: GaussianState) -> GaussianState:
    """Tensor product of Gaussian states (block-diagonal covariance)."""
    if not states:
        raise DimensionError("tensor() needs at least one state")
    mean = np.concatenate([s.mean for s in states])
    cov = np.zeros((mean.size, mean.size))
    at = 0
    for s in states:
        d = s.mean.size
        cov[at : at + d, at : at + d] = s.cov
        at += d
    return GaussianState(mean, cov)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def apply_symplectic(state: GaussianState, transform: SymplecticTransform) -> GaussianState:
    """Evolve a state through a symplectic map.

    The mean picks up ``matrix @ mean + shift`` and the covariance becomes
    ``matrix @ cov @ matrix.T``.
    """
    if state.n_modes != transform.n_modes:
        raise DimensionError(
            f"state has {state.n_modes} modes, transform expects {transform.n_modes}"
        )
    s = transform.matrix
    return GaussianState(s @ state.mean + transform.shift, s @ state.cov @ s.T)


def apply_channel(state: GaussianState, channel: GaussianChannel) -> GaussianState:
    """Send a state through a Gaussian channel (gain map plus added noise)."""
    if state.n_modes != channel.n_modes:
        raise DimensionError(
            f"state has {state.n_modes} modes, channel expects {channel.n_modes}"
        )
    x = channel.gain
    return GaussianState(x @ state.mean, x @ state.cov @ x.T + channel.noise)


def _quad_indices(modes, n_modes: int) -> np.ndarray:
    modes = list(modes)
    if len(set(modes)) != len(modes):
        raise InvalidState(f"duplicate mode indices in {modes}")
    for m in modes:
        if not 0 <= m < n_modes:
            raise IndexError(f"mode index {m} out of range for {n_modes} modes")
    return np.array([q for m in modes for q in (2 * m, 2 * m + 1)], dtype=int)


def reduce_to_modes(state: GaussianState, modes) -> GaussianState:
    """Marginal state on the selected modes (Gaussian partial trace).

    ``modes`` is an ordered sequence of distinct mode indices; the output
    mode order follows it.
    """
    idx = _quad_indices(modes, state.n_modes)
    if idx.size == 0:
        raise DimensionError("mode selection must not be empty")
    return GaussianState(state.mean[idx], state.cov[np.ix_(idx, idx)])


def validate_uncertainty(state: GaussianState) -> bool:
    """True iff ``cov + (i/2) Omega`` has no eigenvalue below -POSITIVITY_TOL."""
    herm = state.cov + 0.5j * symplectic_form(state.n_modes)
    return bool(np.linalg.eigvalsh(herm).min() >= -POSITIVITY_TOL)


def state_overlap(a: GaussianState, b: GaussianState) -> float:
    """Hilbert-Schmidt overlap tr(rho_a rho_b) of two Gaussian states.

    Equals the fidelity ``<psi| rho |psi>`` whenever one of the two states
    is pure.
    """
    if a.n_modes != b.n_modes:
        raise DimensionError("states live on different mode counts")
    total = a.cov + b.cov
    d = a.mean - b.mean
    det = np.linalg.det(total)
    if det <= 0.0:
        raise InvalidState("covariance sum is singular")
    return float(np.exp(-0.5 * d @ np.linalg.solve(total, d)) / np.sqrt(det))


def coherent_fidelity(alpha_mean, state: GaussianState) -> float:
    """Overlap of the coherent state centred at ``alpha_mean = (x, p)`` with ``state``.

    Closed form: ``exp(-d^T (V + I/2)^{-1} d / 2) / sqrt(det(V + I/2))`` with
    ``d`` the mean difference and ``V`` the state covariance.  For two
    coherent states this reduces to ``exp(-|alpha - alpha'|^2)``.
    """
    if state.n_modes != 1:
        raise DimensionError("coherent_fidelity expects a single-mode state")
    if not validate_uncertainty(state):
        raise InvalidState("state violates the uncertainty relation")
    x, p = alpha_mean
    return state_overlap(coherent_state(float(x), float(p)), state)
