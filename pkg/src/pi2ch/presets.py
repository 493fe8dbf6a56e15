"""Named initial-data profiles and Fourier mode-list construction.

A profile spec is either a preset name or a list of (mode, cos-amp, sin-amp)
triples.  Density profiles are returned as their zero-mean representatives.
"""

from __future__ import annotations

import math

import numpy as np

from .spectral import GridSpec, PeriodicField, project_zero_mean

PRESET_NAMES = ("zero", "single-mode", "two-mode", "gaussian", "steep")


def _gaussian_bump(grid: GridSpec, amp: float = 0.5, width: float = 0.1) -> np.ndarray:
    """Periodized Gaussian centered at 1/2; image terms truncated below eps."""
    x = grid.x
    v = np.zeros(grid.n)
    m = 0
    while True:
        for shift in ({0} if m == 0 else {-m, m}):
            term = amp * np.exp(-(((x - 0.5 + shift) / width) ** 2))
            v += term
        if amp * math.exp(-((m + 0.5) / width) ** 2) < 1e-17:
            break
        m += 1
    return v


def preset_field(grid: GridSpec, name: str) -> PeriodicField:
    x = grid.x
    if name == "zero":
        return PeriodicField.zero(grid)
    if name == "single-mode":
        return PeriodicField(grid, 0.2 * np.sin(2.0 * np.pi * x))
    if name == "two-mode":
        return PeriodicField(
            grid, 0.12 * np.sin(2.0 * np.pi * x) + 0.06 * np.cos(4.0 * np.pi * x)
        )
    if name == "gaussian":
        return PeriodicField(grid, _gaussian_bump(grid))
    if name == "steep":
        return PeriodicField(grid, -1.2 * np.sin(2.0 * np.pi * x))
    raise ValueError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")


def build_field(grid: GridSpec, spec, zero_mean: bool = False) -> PeriodicField:
    """Materialize a profile spec (preset name or mode list) on the grid."""
    if isinstance(spec, str):
        f = preset_field(grid, spec)
    elif isinstance(spec, (list, tuple)):
        f = PeriodicField.from_modes(grid, spec)
    else:
        raise ValueError(f"profile spec must be a preset name or mode list, got {spec!r}")
    return project_zero_mean(f) if zero_mean else f
