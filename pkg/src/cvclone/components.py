"""Factories for the elementary symplectic transforms used by the circuits.

All factories produce :class:`~cvclone.states.SymplecticTransform` objects
acting on ``n_modes`` modes; the constructor re-checks the symplectic
condition, so a factory bug cannot produce a non-physical element.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidGain
from .states import SymplecticTransform


def _check_modes(n_modes: int, *modes: int) -> None:
    for m in modes:
        if not 0 <= m < n_modes:
            raise IndexError(f"mode index {m} out of range for {n_modes} modes")
    if len(set(modes)) != len(modes):
        raise IndexError(f"mode indices must be distinct, got {modes}")


def identity_transform(n_modes: int) -> SymplecticTransform:
    return SymplecticTransform(np.eye(2 * n_modes))


def beam_splitter_5050(mode_a: int, mode_b: int, n_modes: int) -> SymplecticTransform:
    """Phase-free 50:50 beam splitter.

    Maps (u, v) -> ((u+v)/sqrt2, (u-v)/sqrt2) on the x and p quadratures
    alike; it is its own inverse.
    """
    _check_modes(n_modes, mode_a, mode_b)
    s = np.eye(2 * n_modes)
    c = 1.0 / np.sqrt(2.0)
    ia, ib = 2 * mode_a, 2 * mode_b
    for off in (0, 1):
        s[ia + off, ia + off] = c
        s[ia + off, ib + off] = c
        s[ib + off, ia + off] = c
        s[ib + off, ib + off] = -c
    return SymplecticTransform(s)


def beam_splitter(theta: float, mode_a: int, mode_b: int, n_modes: int) -> SymplecticTransform:
    """General phase-free beam splitter of mixing angle theta.

    a1 -> cos(theta) a1 + sin(theta) a2, a2 -> -sin(theta) a1 + cos(theta) a2.
    """
    _check_modes(n_modes, mode_a, mode_b)
    s = np.eye(2 * n_modes)
    c, d = np.cos(theta), np.sin(theta)
    ia, ib = 2 * mode_a, 2 * mode_b
    for off in (0, 1):
        s[ia + off, ia + off] = c
        s[ia + off, ib + off] = d
        s[ib + off, ia + off] = -d
        s[ib + off, ib + off] = c
    return SymplecticTransform(s)


def amplifier(gain: float, signal: int, idler: int, n_modes: int) -> SymplecticTransform:
    """Phase-insensitive linear amplifier, a_s -> sqrt(G) a_s + sqrt(G-1) a_i^dag.

    On quadratures::

        x_s -> sqrt(G) x_s + sqrt(G-1) x_i     p_s -> sqrt(G) p_s - sqrt(G-1) p_i
        x_i -> sqrt(G-1) x_s + sqrt(G) x_i     p_i -> -sqrt(G-1) p_s + sqrt(G) p_i

    The phase conjugation lands on the idler, which therefore carries the
    time-reversed copy of the signal.
    """
    if not np.isfinite(gain) or gain < 1.0:
        raise InvalidGain(f"amplifier gain must be >= 1, got {gain}")
    _check_modes(n_modes, signal, idler)
    g, h = np.sqrt(gain), np.sqrt(gain - 1.0)
    s = np.eye(2 * n_modes)
    xs, ps, xi, pi = 2 * signal, 2 * signal + 1, 2 * idler, 2 * idler + 1
    s[xs, xs] = g
    s[xs, xi] = h
    s[ps, ps] = g
    s[ps, pi] = -h
    s[xi, xs] = h
    s[xi, xi] = g
    s[pi, ps] = -h
    s[pi, pi] = g
    return SymplecticTransform(s)


def cv_cnot(control: int, target: int, sign: int, n_modes: int) -> SymplecticTransform:
    """Continuous-variable controlled-NOT gate with a sign flag.

    For sign s: x_target -> x_target + s * x_control and
    p_control -> p_control - s * p_target; all other quadratures are fixed.
    sign=-1 gives the inverse of sign=+1.
    """
    if sign not in (+1, -1):
        raise InvalidGain(f"sign must be +1 or -1, got {sign}")
    _check_modes(n_modes, control, target)
    s = np.eye(2 * n_modes)
    s[2 * target, 2 * control] = float(sign)
    s[2 * control + 1, 2 * target + 1] = -float(sign)
    return SymplecticTransform(s)


def dft_network(m: int, start_mode: int, n_modes: int) -> SymplecticTransform:
    """Discrete-Fourier beam-splitter network on m consecutive modes.

    Realifies the unitary F_kl = exp(2 pi i k l / m) / sqrt(m) acting on the
    annihilation operators: x'_k = sum_l (Re F_kl x_l - Im F_kl p_l) and
    p'_k = sum_l (Im F_kl x_l + Re F_kl p_l).  Orthogonal and symplectic.
    """
    if m < 1:
        raise IndexError(f"network size must be >= 1, got {m}")
    if start_mode < 0 or start_mode + m > n_modes:
        raise IndexError(f"modes [{start_mode}, {start_mode + m}) out of range")
    f = np.exp(2.0j * np.pi * np.outer(np.arange(m), np.arange(m)) / m) / np.sqrt(m)
    s = np.eye(2 * n_modes)
    for k in range(m):
        for l in range(m):
            rk, rl = 2 * (start_mode + k), 2 * (start_mode + l)
            s[rk, rl] = f[k, l].real
            s[rk, rl + 1] = -f[k, l].imag
            s[rk + 1, rl] = f[k, l].imag
            s[rk + 1, rl + 1] = f[k, l].real
    return SymplecticTransform(s)


def squeezer(r: float, mode: int, n_modes: int) -> SymplecticTransform:
    """Single-mode squeezer: x -> exp(-r) x, p -> exp(r) p."""
    if not np.isfinite(r):
        raise InvalidGain(f"squeezing parameter must be finite, got {r}")
    _check_modes(n_modes, mode)
    s = np.eye(2 * n_modes)
    s[2 * mode, 2 * mode] = np.exp(-r)
    s[2 * mode + 1, 2 * mode + 1] = np.exp(r)
    return SymplecticTransform(s)


def phase_rotation(phi: float, mode: int, n_modes: int) -> SymplecticTransform:
    """Phase-space rotation a -> exp(-i phi) a of a single mode."""
    _check_modes(n_modes, mode)
    s = np.eye(2 * n_modes)
    i = 2 * mode
    s[i, i] = np.cos(phi)
    s[i, i + 1] = np.sin(phi)
    s[i + 1, i] = -np.sin(phi)
    s[i + 1, i + 1] = np.cos(phi)
    return SymplecticTransform(s)


def displacement(dx: float, dp: float, mode: int, n_modes: int) -> SymplecticTransform:
    """Displacement of one mode by (dx, dp); identity on the covariance."""
    _check_modes(n_modes, mode)
    shift = np.zeros(2 * n_modes)
    shift[2 * mode] = dx
    shift[2 * mode + 1] = dp
    return SymplecticTransform(np.eye(2 * n_modes), shift)
