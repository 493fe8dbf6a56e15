"""Spectral calculus for real periodic fields on the unit circle.

Fields live on the uniform grid x_j = j/n of [0, 1) and are identified with
their trigonometric interpolants.  All linear operators (differentiation, the
Helmholtz operator 1 - d^2/dx^2 and its inverse, Sobolev norms) act as Fourier
multipliers on the rfft coefficients; products are formed pointwise and then
dealiased with the 2/3 rule, which is exact for quadratic nonlinearities of
sufficiently band-limited inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * math.pi


class GridMismatchError(ValueError):
    """Raised when an operation combines fields on different grids."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid: n points on [0, 1), dealiasing cutoff for products.

    Modes with index k > dealias_fraction * n/2 are zeroed after every product.
    """

    n: int
    dealias_fraction: float = 2.0 / 3.0

    def __post_init__(self) -> None:
        if self.n < 16 or self.n % 2 != 0:
            raise ValueError(f"grid size n must be even and >= 16, got {self.n}")
        if not 0.0 < self.dealias_fraction <= 1.0:
            raise ValueError(
                f"dealias_fraction must lie in (0, 1], got {self.dealias_fraction}"
            )

    @property
    def x(self) -> np.ndarray:
        return _grid_points(self.n)

    @property
    def dealias_cutoff(self) -> int:
        """Largest mode index kept after a product."""
        return int(math.floor(self.dealias_fraction * self.n / 2.0 + 1e-12))


@lru_cache(maxsize=None)
def _grid_points(n: int) -> np.ndarray:
    x = np.arange(n, dtype=np.float64) / n
    x.setflags(write=False)
    return x


@lru_cache(maxsize=None)
def _modes(n: int) -> np.ndarray:
    """Integer mode indices of the rfft layout: 0, 1, ..., n/2."""
    k = np.arange(n // 2 + 1, dtype=np.float64)
    k.setflags(write=False)
    return k


@lru_cache(maxsize=None)
def _derivative_multiplier(n: int) -> np.ndarray:
    # Nyquist derivative is set to zero: the sampled sine at k = n/2 vanishes.
    m = 1j * TWO_PI * _modes(n)
    m = m.copy()
    m[-1] = 0.0
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def _helmholtz_multiplier(n: int) -> np.ndarray:
    m = 1.0 + (TWO_PI * _modes(n)) ** 2
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def _dealias_mask(n: int, cutoff: int) -> np.ndarray:
    mask = _modes(n) <= cutoff
    mask.setflags(write=False)
    return mask


@dataclass(frozen=True)
class PeriodicField:
    """Real samples of a period-1 function on the uniform grid of its GridSpec.

    Instances are immutable; every operation returns a new field.  The dual
    spectral view is available through spectrum()/from_spectrum and round-trips
    to round-off.
    """

    grid: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.n,):
            raise ValueError(
                f"values must have shape ({self.grid.n},), got {v.shape}"
            )
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_function(cls, grid: GridSpec, fn) -> "PeriodicField":
        return cls(grid, fn(grid.x))

    @classmethod
    def constant(cls, grid: GridSpec, c: float) -> "PeriodicField":
        return cls(grid, np.full(grid.n, float(c)))

    @classmethod
    def zero(cls, grid: GridSpec) -> "PeriodicField":
        return cls(grid, np.zeros(grid.n))

    @classmethod
    def from_spectrum(cls, grid: GridSpec, coeffs: np.ndarray) -> "PeriodicField":
        """Inverse transform of rfft-layout coefficients normalized by 1/n."""
        c = np.asarray(coeffs, dtype=np.complex128)
        if c.shape != (grid.n // 2 + 1,):
            raise ValueError(
                f"expected {grid.n // 2 + 1} rfft coefficients, got {c.shape}"
            )
        return cls(grid, np.fft.irfft(c * grid.n, n=grid.n))

    @classmethod
    def from_modes(cls, grid: GridSpec, modes) -> "PeriodicField":
        """Build sum_k a_k cos(2 pi k x) + b_k sin(2 pi k x) from (k, a, b) triples."""
        x = grid.x
        v = np.zeros(grid.n)
        for k, a, b in modes:
            k = int(k)
            if k < 0 or k > grid.n // 2:
                raise ValueError(f"mode {k} outside representable range 0..{grid.n // 2}")
            if k == 0:
                v = v + a
            else:
                v = v + a * np.cos(TWO_PI * k * x) + b * np.sin(TWO_PI * k * x)
        return cls(grid, v)

    # -- spectral view -----------------------------------------------------

    def spectrum(self) -> np.ndarray:
        """rfft coefficients normalized by 1/n (so a pure mode has |coeff| = amp/2)."""
        return np.fft.rfft(self.values) / self.grid.n

    # -- arithmetic --------------------------------------------------------

    def _check_same_grid(self, other: "PeriodicField") -> None:
        if self.grid != other.grid:
            raise GridMismatchError(
                f"fields live on different grids: {self.grid} vs {other.grid}"
            )

    def __add__(self, other):
        if isinstance(other, PeriodicField):
            self._check_same_grid(other)
            return PeriodicField(self.grid, self.values + other.values)
        return PeriodicField(self.grid, self.values + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PeriodicField):
            self._check_same_grid(other)
            return PeriodicField(self.grid, self.values - other.values)
        return PeriodicField(self.grid, self.values - float(other))

    def __rsub__(self, other):
        return PeriodicField(self.grid, float(other) - self.values)

    def __mul__(self, other):
        if isinstance(other, PeriodicField):
            return multiply(self, other)
        return PeriodicField(self.grid, self.values * float(other))

    def __rmul__(self, other):
        return PeriodicField(self.grid, self.values * float(other))

    def __neg__(self):
        return PeriodicField(self.grid, -self.values)

    def sup(self) -> float:
        return float(np.max(np.abs(self.values)))


# ---------------------------------------------------------------------------
# Core operations
# ---------------------------------------------------------------------------


def derivative(f: PeriodicField) -> PeriodicField:
    """Exact derivative of the trigonometric interpolant; the result has zero mean."""
    n = f.grid.n
    c = np.fft.rfft(f.values) * _derivative_multiplier(n)
    return PeriodicField(f.grid, np.fft.irfft(c, n=n))


def apply_helmholtz(f: PeriodicField) -> PeriodicField:
    """Apply 1 - d^2/dx^2: mode k is scaled by 1 + (2 pi k)^2."""
    n = f.grid.n
    c = np.fft.rfft(f.values) * _helmholtz_multiplier(n)
    return PeriodicField(f.grid, np.fft.irfft(c, n=n))


def invert_helmholtz(f: PeriodicField) -> PeriodicField:
    """Invert 1 - d^2/dx^2: mode k is scaled by 1/(1 + (2 pi k)^2)."""
    n = f.grid.n
    c = np.fft.rfft(f.values) / _helmholtz_multiplier(n)
    return PeriodicField(f.grid, np.fft.irfft(c, n=n))


def mean(f: PeriodicField) -> float:
    """Integral over one period; the uniform-grid average, exact for band-limited f."""
    return float(np.mean(f.values))


def project_zero_mean(f: PeriodicField) -> PeriodicField:
    """Remove the mean; idempotent linear projection."""
    return PeriodicField(f.grid, f.values - np.mean(f.values))


def multiply(f: PeriodicField, g: PeriodicField) -> PeriodicField:
    """Pointwise product followed by dealiasing at the grid's cutoff mode."""
    f._check_same_grid(g)
    n = f.grid.n
    c = np.fft.rfft(f.values * g.values)
    c = np.where(_dealias_mask(n, f.grid.dealias_cutoff), c, 0.0)
    return PeriodicField(f.grid, np.fft.irfft(c, n=n))


def l2_inner(f: PeriodicField, g: PeriodicField) -> float:
    """L2 pairing of the samples: (1/n) sum f_j g_j, exact below the alias limit."""
    f._check_same_grid(g)
    return float(np.dot(f.values, g.values)) / f.grid.n


def sobolev_norm(f: PeriodicField, s: float) -> float:
    """H^s norm via the multiplier (1 + (2 pi k)^2)^s on squared coefficients.

    Real-coefficient convention: s = 0 reproduces the L2 norm, so a unit
    constant has norm 1 and sin(2 pi x) has norm sqrt(1/2).
    """
    if s < 0:
        raise ValueError(f"order s must be >= 0, got {s}")
    n = f.grid.n
    c = np.fft.rfft(f.values) / n
    w = np.full(n // 2 + 1, 2.0)
    w[0] = 1.0
    # Nyquist holds the balanced cosine interpolant, whose L2 norm^2 is amp^2/2.
    w[-1] = 0.5
    mult = _helmholtz_multiplier(n) ** s
    return float(math.sqrt(np.sum(w * mult * np.abs(c) ** 2)))
