"""Brute force position-space simulation of the one-to-two cloner.

This is the package's independent oracle: instead of covariance algebra it
discretises the three-mode output wavefunction of the cloning circuit on a
cubic grid.  For an input wavefunction psi the output amplitude has the
closed form

    Psi(u, v, w) = pi**-0.5 * psi(u + v - w) * exp(-((w-v)**2 + (w-u)**2)/2)

with u, v the clone coordinates and w the ancilla coordinate.  Marginals,
reduced density matrices and fidelities are then plain Riemann sums, so any
agreement with the covariance formalism is a genuine cross-check.

Grid axes follow the FFT convention x_k = -L + k * (2L / n); the matching
momentum axis has spacing pi / L.  All reductions are ordinary matrix
products with a fixed summation order, so results are bit-stable.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmall, InvalidState

BOUNDARY_MASS_LIMIT = 1e-6


@dataclass(frozen=True)
class GridParams:
    """Cubic grid geometry: points per axis and half extent L (span [-L, L))."""

    points_per_axis: int = 64
    half_extent: float = 8.0

    def __post_init__(self):
        if self.points_per_axis < 16:
            raise InvalidState("need at least 16 points per axis")
        if not np.isfinite(self.half_extent) or self.half_extent <= 0.0:
            raise InvalidState("half extent must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.points_per_axis

    def axis(self) -> np.ndarray:
        n = self.points_per_axis
        return -self.half_extent + self.spacing * np.arange(n)

    @property
    def momentum_spacing(self) -> float:
        return np.pi / self.half_extent

    def momentum_axis(self) -> np.ndarray:
        n = self.points_per_axis
        return self.momentum_spacing * (np.arange(n) - n // 2)


@dataclass(frozen=True)
class WaveFunctionGrid:
    """Discretised three-mode wavefunction over (clone a, clone b, ancilla)."""

    psi: np.ndarray
    params: GridParams

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.psi) ** 2) * self.params.spacing**3)


@dataclass(frozen=True)
class DensityGrid:
    """Single-mode density matrix rho(u, u') on the position grid."""

    rho: np.ndarray
    params: GridParams

    def trace(self) -> float:
        return float(np.trace(self.rho).real * self.params.spacing)


def coherent_wavefunction(x_mean: float, p_mean: float):
    """Position wavefunction of a coherent state centred at (x_mean, p_mean)."""

    def psi(u):
        return np.pi**-0.25 * np.exp(-0.5 * (u - x_mean) ** 2 + 1j * p_mean * u)

    return psi


def squeezed_wavefunction(r: float, x_mean: float = 0.0, p_mean: float = 0.0):
    """Position wavefunction of a squeezed state, x-variance exp(-2r)/2."""
    s2 = np.exp(-2.0 * r)

    def psi(u):
        return (np.pi * s2) ** -0.25 * np.exp(-((u - x_mean) ** 2) / (2.0 * s2) + 1j * p_mean * u)

    return psi


def apply_cloner_kernel(input_psi, params: GridParams) -> np.ndarray:
    """Evaluate the cloning kernel on the grid; linear in the input, no normalisation."""
    x = params.axis()
    u, v, w = np.meshgrid(x, x, x, indexing="ij", sparse=True)
    return np.pi**-0.5 * input_psi(u + v - w) * np.exp(-0.5 * ((w - v) ** 2 + (w - u) ** 2))


def clone_wave_function(input_psi, params: GridParams, normalize: bool = True) -> WaveFunctionGrid:
    """Clone an input wavefunction on the grid.

    The input is normalised on the grid first and must not touch the
    boundary (outermost-cell mass below BOUNDARY_MASS_LIMIT), otherwise the
    kernel wraps probability out of the box.
    """
    x = params.axis()
    d = params.spacing
    line = np.asarray(input_psi(x), dtype=complex)
    norm2 = float(np.sum(np.abs(line) ** 2) * d)
    if norm2 <= 0.0:
        raise InvalidState("input wavefunction vanishes on the grid")
    scale = 1.0 / np.sqrt(norm2)
    edge_mass = float((np.abs(line[0]) ** 2 + np.abs(line[-1]) ** 2) * d) * scale**2
    if edge_mass > BOUNDARY_MASS_LIMIT:
        raise GridTooSmall(
            f"boundary mass {edge_mass:.3e} exceeds {BOUNDARY_MASS_LIMIT:.0e}; widen the grid"
        )
    psi3 = apply_cloner_kernel(input_psi, params)
    if normalize:
        psi3 = psi3 * scale
        total = float(np.sum(np.abs(psi3) ** 2) * d**3)
        if abs(total - 1.0) > 1e-3:
            raise GridTooSmall(f"output norm {total:.6f} deviates from 1; widen the grid")
    return WaveFunctionGrid(psi3, params)


_MODE_AXES = {"a": 0, "b": 1, "ancilla": 2}


def reduced_density(grid: WaveFunctionGrid, mode: str) -> DensityGrid:
    """Trace out two of the three modes and return the remaining density matrix."""
    if mode not in _MODE_AXES:
        raise InvalidState(f'mode must be one of {sorted(_MODE_AXES)}, got {mode!r}')
    n = grid.params.points_per_axis
    flat = np.moveaxis(grid.psi, _MODE_AXES[mode], 0).reshape(n, n * n)
    rho = (flat @ flat.conj().T) * grid.params.spacing**2
    return DensityGrid(rho, grid.params)


def position_moments(density: DensityGrid):
    """(mean, variance) of position from the diagonal of the density matrix."""
    x = density.params.axis()
    prob = np.diag(density.rho).real * density.params.spacing
    total = prob.sum()
    mean = float((x * prob).sum() / total)
    var = float((((x - mean) ** 2) * prob).sum() / total)
    return mean, var


def _momentum_rep(density: DensityGrid) -> np.ndarray:
    x = density.params.axis()
    p = density.params.momentum_axis()
    f = density.params.spacing * np.exp(-1j * np.outer(p, x)) / np.sqrt(2.0 * np.pi)
    return f @ density.rho @ f.conj().T


def momentum_moments(density: DensityGrid):
    """(mean, variance) of momentum via the Fourier-transformed density."""
    p = density.params.momentum_axis()
    prob = np.diag(_momentum_rep(density)).real * density.params.momentum_spacing
    total = prob.sum()
    mean = float((p * prob).sum() / total)
    var = float((((p - mean) ** 2) * prob).sum() / total)
    return mean, var


def grid_coherent_fidelity(density: DensityGrid, alpha_mean) -> float:
    """Overlap <alpha| rho |alpha> by double Riemann sum."""
    x, p = alpha_mean
    psi = coherent_wavefunction(float(x), float(p))(density.params.axis())
    value = psi.conj() @ density.rho @ psi * density.params.spacing**2
    return float(value.real)


def fourier_transform_2d(values: np.ndarray, axis: np.ndarray) -> np.ndarray:
    """Symplectic 2-D Fourier transform used by the cloner-exchange duality.

    g(x, p) = (1 / 2 pi) * integral dx' dp' exp(i (p x' - x p')) f(x', p'),
    with f sampled as values[i, j] = f(axis[i], axis[j]).
    """
    d = axis[1] - axis[0]
    phase_minus = np.exp(-1j * np.outer(axis, axis))  # [j, k] -> e^{-i x_k p_j}
    phase_plus = np.exp(1j * np.outer(axis, axis))  # [i, l] -> e^{+i p_l x_i}
    a = values @ phase_minus
    return (a.T @ phase_plus) * d**2 / (2.0 * np.pi)


def write_density_csv(density: DensityGrid, path) -> None:
    """Export a density matrix as CSV rows (u, u_prime, re_rho, im_rho)."""
    x = density.params.axis()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["u", "u_prime", "re_rho", "im_rho"])
        for i, u in enumerate(x):
            for j, up in enumerate(x):
                writer.writerow(
                    [
                        format(u, ".12g"),
                        format(up, ".12g"),
                        format(density.rho[i, j].real, ".12g"),
                        format(density.rho[i, j].imag, ".12g"),
                    ]
                )


def write_profile_csv(density: DensityGrid, path, kind: str = "position") -> None:
    """Export a marginal probability profile as a two-column CSV."""
    if kind == "position":
        coord = density.params.axis()
        prob = np.diag(density.rho).real
    elif kind == "momentum":
        coord = density.params.momentum_axis()
        prob = np.diag(_momentum_rep(density)).real
    else:
        raise InvalidState(f'kind must be "position" or "momentum", got {kind!r}')
    header = "x" if kind == "position" else "p"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([header, "density"])
        for c, q in zip(coord, prob):
            writer.writerow([format(c, ".12g"), format(q, ".12g")])


def check_fourier_self_dual(params: GridParams, f=None) -> float:
    """Max deviation |g - f| of an error distribution from its 2-D Fourier dual.

    Defaults to the rotation-invariant Gaussian exp(-(x^2+p^2)/2)/sqrt(pi),
    which is its own dual.
    """
    axis = params.axis()
    if f is None:
        def f(x, p):
            return np.exp(-0.5 * (x**2 + p**2)) / np.sqrt(np.pi)

    xg, pg = np.meshgrid(axis, axis, indexing="ij")
    values = f(xg, pg).astype(complex)
    g = fourier_transform_2d(values, axis)
    return float(np.abs(g - values).max())
