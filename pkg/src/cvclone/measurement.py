"""Homodyne and joint quadrature measurements as seeded Monte Carlo sampling.

Randomness comes from ``numpy.random.default_rng`` (the PCG64 bit
generator) keyed by a caller-supplied 64-bit seed; identical seeds give
bit-identical batches.  Parallel batches must use distinct seeds, there is
no hidden shared generator.

The joint measurement is built literally as a 50:50 beam splitter with a
vacuum port followed by one homodyne per arm (outcomes rescaled by sqrt 2),
so its half-unit noise penalty per quadrature emerges from the vacuum port
instead of being injected by hand.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .components import beam_splitter_5050
from .errors import DimensionError, InvalidState
from .states import GaussianState, apply_symplectic, tensor, vacuum_state, validate_uncertainty

RNG_NAME = "numpy.random.PCG64"


@dataclass(frozen=True)
class SampleBatch:
    """A vector of i.i.d. measurement outcomes and the seed that made it."""

    values: np.ndarray
    seed: int

    def __post_init__(self):
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        object.__setattr__(self, "values", values)

    @property
    def count(self) -> int:
        return self.values.size


def _require_valid_single_mode(state: GaussianState) -> None:
    if state.n_modes != 1:
        raise DimensionError("sampling expects a single-mode state")
    if not validate_uncertainty(state):
        raise InvalidState("state violates the uncertainty relation")


def homodyne_sample(state: GaussianState, quadrature: str, count: int, seed: int) -> SampleBatch:
    """Sample one quadrature of a single-mode Gaussian state.

    quadrature is "x" or "p"; outcomes are N(mean_q, var_q) draws.
    """
    _require_valid_single_mode(state)
    if quadrature not in ("x", "p"):
        raise InvalidState(f'quadrature must be "x" or "p", got {quadrature!r}')
    if count < 1:
        raise InvalidState("count must be >= 1")
    q = 0 if quadrature == "x" else 1
    rng = np.random.default_rng(seed)
    values = state.mean[q] + np.sqrt(state.cov[q, q]) * rng.standard_normal(count)
    return SampleBatch(values, seed)


def joint_measure_sample(state: GaussianState, count: int, seed: int):
    """Simultaneously sample x and p of a single-mode state.

    Returns (x_batch, p_batch).  The two outcome streams are drawn from the
    joint Gaussian of (x on arm 1, p on arm 2) after the splitter, so their
    correlation with each other is physical, not independent noise.
    """
    _require_valid_single_mode(state)
    if count < 1:
        raise InvalidState("count must be >= 1")
    split = apply_symplectic(tensor(state, vacuum_state(1)), beam_splitter_5050(0, 1, 2))
    idx = np.array([0, 3])  # x of arm 1, p of arm 2
    mean = np.sqrt(2.0) * split.mean[idx]
    cov = 2.0 * split.cov[np.ix_(idx, idx)]
    chol = np.linalg.cholesky(cov)
    rng = np.random.default_rng(seed)
    draws = mean + rng.standard_normal((count, 2)) @ chol.T
    return SampleBatch(draws[:, 0], seed), SampleBatch(draws[:, 1], seed)


def estimate_mean_var(batch: SampleBatch):
    """Unbiased sample mean and variance with a variance standard error.

    The standard error of the variance uses the Gaussian large-sample
    approximation var * sqrt(2 / count).
    """
    if batch.count < 2:
        raise InvalidState("need at least two samples to estimate a variance")
    mean = float(batch.values.mean())
    var = float(batch.values.var(ddof=1))
    std_error = var * np.sqrt(2.0 / batch.count)
    return mean, var, float(std_error)


def write_batch_csv(batch: SampleBatch, path, header: str = "value") -> None:
    """Export a batch as a single-column CSV with a header row."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([header])
        for v in batch.values:
            writer.writerow([format(v, ".12g")])
