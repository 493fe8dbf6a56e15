"""Deterministic band-limited random fields for identity checks and scans.

Coefficients are i.i.d. uniform in [-1, 1], damped by 1/(1 + k^2), over modes
|k| <= max_mode.  Keeping max_mode at or below half the dealiasing cutoff makes
every quadratic product exact on the grid, so identity residuals measure only
formula errors, not discretization.
"""

from __future__ import annotations

import numpy as np

from .geometry import TangentPair
from .spectral import GridSpec, PeriodicField, project_zero_mean

DEFAULT_MAX_MODE = 8


def effective_max_mode(
    grid: GridSpec, requested: int = DEFAULT_MAX_MODE, degree: int = 2
) -> int:
    """Largest mode keeping degree-fold products below the dealiasing cutoff."""
    return max(1, min(requested, grid.dealias_cutoff // degree))


def random_field(
    grid: GridSpec,
    rng: np.random.Generator,
    max_mode: int = DEFAULT_MAX_MODE,
    include_mean: bool = True,
) -> PeriodicField:
    kmax = effective_max_mode(grid, max_mode)
    x = grid.x
    coeffs = rng.uniform(-1.0, 1.0, size=(kmax + 1, 2))
    v = np.zeros(grid.n)
    if include_mean:
        v += coeffs[0, 0]
    for k in range(1, kmax + 1):
        damp = 1.0 / (1.0 + k * k)
        v += damp * (
            coeffs[k, 0] * np.cos(2.0 * np.pi * k * x)
            + coeffs[k, 1] * np.sin(2.0 * np.pi * k * x)
        )
    return PeriodicField(grid, v)


def random_tangent_pair(
    grid: GridSpec, rng: np.random.Generator, max_mode: int = DEFAULT_MAX_MODE
) -> TangentPair:
    v1 = random_field(grid, rng, max_mode, include_mean=True)
    v2 = project_zero_mean(random_field(grid, rng, max_mode, include_mean=False))
    return TangentPair(v1, v2)


def pair_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for item `index` of a scan with base `seed`."""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))
