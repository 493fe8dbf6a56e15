"""Orientation-preserving circle diffeomorphisms and composition of fields.

A map phi = id + d with periodic displacement d and phi' = 1 + d' > 0 acts on
fields by composition.  Off-grid values come from barycentric trigonometric
interpolation (Henrici's even-n form), which reproduces band-limited fields to
round-off; a periodic cubic spline is available as a fallback switch.
Inversion solves phi(z) = y per grid point with a bracketed Newton iteration.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline

from .spectral import GridSpec, PeriodicField, derivative

DEFAULT_SLOPE_FLOOR = 1e-6


class DiffeoBreakdownError(RuntimeError):
    """Slope of the flow map fell below the configured floor (near breakdown)."""


@dataclass(frozen=True)
class DiffeoMap:
    """phi(x) = x + displacement(x) with phi' > 0 at every grid point."""

    grid: GridSpec
    displacement: PeriodicField

    def __post_init__(self) -> None:
        if self.displacement.grid != self.grid:
            raise ValueError("displacement must live on the diffeomorphism's grid")
        if self.min_slope() <= 0.0:
            raise ValueError(
                f"map is not orientation preserving: min slope {self.min_slope():.3e}"
            )

    @classmethod
    def identity(cls, grid: GridSpec) -> "DiffeoMap":
        return cls(grid, PeriodicField.zero(grid))

    @classmethod
    def rotation(cls, grid: GridSpec, theta: float) -> "DiffeoMap":
        return cls(grid, PeriodicField.constant(grid, theta))

    @classmethod
    def from_function(cls, grid: GridSpec, displacement_fn) -> "DiffeoMap":
        return cls(grid, PeriodicField.from_function(grid, displacement_fn))

    def point_values(self) -> np.ndarray:
        """phi(x_j) on the grid."""
        return self.grid.x + self.displacement.values

    def slope(self) -> PeriodicField:
        """phi' = 1 + displacement' as a grid field."""
        return derivative(self.displacement) + 1.0

    def min_slope(self) -> float:
        return float(np.min(1.0 + derivative(self.displacement).values))


# ---------------------------------------------------------------------------
# Off-grid evaluation
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _node_data(n: int) -> tuple:
    """Conjugate node phases exp(-i pi x_j) and alternating signs (-1)^j."""
    j = np.arange(n)
    phases = np.exp(-1j * np.pi * j / n)
    signs = np.where(j % 2 == 0, 1.0, -1.0)
    phases.setflags(write=False)
    signs.setflags(write=False)
    return phases, signs


def _barycentric_kernel(grid: GridSpec, points: np.ndarray) -> tuple:
    """Weight matrix of the even-n barycentric trig interpolant at given points.

    cot(pi(y - x_j)) is taken as Re/Im of exp(i pi (y - x_j)), built from one
    complex outer product instead of two trig matrices.  Returns
    (weights, exact_rows, exact_cols): rows listed in exact_* hit a grid node
    to round-off and must copy the nodal value instead.
    """
    n = grid.n
    phases, signs = _node_data(n)
    e = np.exp(1j * np.pi * points)[:, None] * phases[None, :]
    s = e.imag
    near = np.abs(s) < 1e-14
    s_safe = np.where(near, 1.0, s)
    c = signs * (e.real / s_safe)
    rows, cols = np.nonzero(near)
    c[rows, :] = 0.0
    denom = c.sum(axis=1)
    denom[rows] = 1.0
    return c / denom[:, None], rows, cols


def evaluate_many(
    fields: list[PeriodicField], points: np.ndarray, method: str = "trig"
) -> list[np.ndarray]:
    """Evaluate several fields at the same off-grid points, sharing the kernel."""
    pts = np.asarray(points, dtype=np.float64)
    if method == "spline":
        return [_spline_evaluate(f, pts) for f in fields]
    if method != "trig":
        raise ValueError(f"unknown interpolation method {method!r}")
    grid = fields[0].grid
    for f in fields[1:]:
        f._check_same_grid(fields[0])
    kernel, rows, cols = _barycentric_kernel(grid, pts)
    out = []
    for f in fields:
        v = kernel @ f.values
        v[rows] = f.values[cols]
        out.append(v)
    return out


def evaluate(f: PeriodicField, points: np.ndarray, method: str = "trig") -> np.ndarray:
    """Trigonometric interpolant of f at arbitrary points (period 1)."""
    return evaluate_many([f], points, method=method)[0]


def _spline_evaluate(f: PeriodicField, points: np.ndarray) -> np.ndarray:
    x = np.concatenate([f.grid.x, [1.0]])
    v = np.concatenate([f.values, [f.values[0]]])
    return CubicSpline(x, v, bc_type="periodic")(np.mod(points, 1.0))


# ---------------------------------------------------------------------------
# Composition and inversion
# ---------------------------------------------------------------------------


def compose(f: PeriodicField, phi: DiffeoMap, method: str = "trig") -> PeriodicField:
    """Samples of f(phi(x_j)); exact to round-off for band-limited f."""
    return compose_many([f], phi, method=method)[0]


def compose_many(
    fields: list[PeriodicField], phi: DiffeoMap, method: str = "trig"
) -> list[PeriodicField]:
    """Compose several fields with the same map, sharing one interpolation kernel."""
    for f in fields:
        if f.grid != phi.grid:
            raise ValueError("field and diffeomorphism live on different grids")
    targets = phi.point_values()
    vals = evaluate_many(fields, targets, method=method)
    return [PeriodicField(phi.grid, v) for v in vals]


def compose_diffeo(phi: DiffeoMap, psi: DiffeoMap) -> DiffeoMap:
    """The composed map phi(psi(x)) as a DiffeoMap."""
    d = compose(phi.displacement, psi)
    return DiffeoMap(phi.grid, psi.displacement + d)


def invert_diffeo(
    phi: DiffeoMap,
    slope_floor: float = DEFAULT_SLOPE_FLOOR,
    tol: float = 1e-13,
    max_iter: int = 80,
    initial: np.ndarray | None = None,
) -> DiffeoMap:
    """Inverse map psi with phi(psi(x_j)) = x_j per grid point.

    Bracketed Newton on the monotone trigonometric interpolant, with bisection
    whenever a Newton step leaves the current bracket.  `initial` may hold the
    displacement values of a nearby inverse to warm-start the iteration.
    Raises DiffeoBreakdownError when min phi' <= slope_floor.
    """
    if phi.min_slope() <= slope_floor:
        raise DiffeoBreakdownError(
            f"min slope {phi.min_slope():.3e} at or below floor {slope_floor:.1e}"
        )
    grid = phi.grid
    y = grid.x
    disp = phi.displacement
    # The interpolant can overshoot the sampled extrema between nodes by
    # ~ h^2 |d''| / 8; pad the root bracket accordingly.
    curv = derivative(derivative(disp)).sup()
    pad = 0.25 * curv / grid.n**2 + 1e-12
    dmin = float(np.min(disp.values)) - pad
    dmax = float(np.max(disp.values)) + pad
    lo = y - dmax
    hi = y - dmin
    slope_field = derivative(disp)

    if initial is not None:
        z = np.clip(y + initial, lo, hi)
    else:
        # First-order guess z = y - d(y); clip into the bracket.
        z = np.clip(y - evaluate(disp, y), lo, hi)
    converged = False
    for _ in range(max_iter):
        d_z, dp_z = evaluate_many([disp, slope_field], z)
        resid = z + d_z - y
        if np.max(np.abs(resid)) < tol:
            converged = True
            break
        # Monotonicity: resid > 0 means z is past the root.
        hi = np.where(resid > 0.0, z, hi)
        lo = np.where(resid < 0.0, z, lo)
        z_new = z - resid / (1.0 + dp_z)
        outside = (z_new <= lo) | (z_new >= hi)
        z = np.where(outside, 0.5 * (lo + hi), z_new)
    if not converged:
        achieved = float(np.max(np.abs(z + evaluate(disp, z) - y)))
        if achieved > 1e-10:
            raise DiffeoBreakdownError(
                f"inverse iteration stalled at residual {achieved:.3e}"
            )
    return DiffeoMap(grid, PeriodicField(grid, z - y))
