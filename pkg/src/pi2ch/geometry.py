"""Algebra and geometry of the semidirect product of circle diffeomorphisms
with scalar classes modulo constants.

Tangent vectors are pairs (v1, v2): a velocity field and the zero-mean
representative of a scalar class.  The module provides the Lie bracket, the
inertia operator diag(1 - d^2/dx^2, zero-mean projection), the kinetic-energy
inner product and its right-invariant extension, the Christoffel operator with
its conjugated form at arbitrary base points, the bilinear operator appearing
in the curvature computation, and residual evaluators for the structural
identities these objects satisfy.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .diffeo import DiffeoMap, compose_many, invert_diffeo
from .spectral import (
    GridMismatchError,
    GridSpec,
    PeriodicField,
    apply_helmholtz,
    derivative,
    invert_helmholtz,
    l2_inner,
    mean,
    multiply,
    project_zero_mean,
)

_MEAN_WARN_TOL = 1e-9


@dataclass(frozen=True)
class TangentPair:
    """(velocity field, zero-mean class representative) on a common grid.

    The second component is normalized to its zero-mean representative on
    construction; a clearly nonzero input mean triggers a warning since the
    caller probably intended a different representative of the same class.
    """

    v1: PeriodicField
    v2: PeriodicField

    def __post_init__(self) -> None:
        if self.v1.grid != self.v2.grid:
            raise GridMismatchError("tangent components live on different grids")
        m = mean(self.v2)
        if abs(m) > _MEAN_WARN_TOL * (1.0 + self.v2.sup()):
            warnings.warn(
                f"second component had mean {m:.3e}; storing its zero-mean "
                "representative",
                stacklevel=2,
            )
        if m != 0.0:
            object.__setattr__(self, "v2", project_zero_mean(self.v2))

    @property
    def grid(self) -> GridSpec:
        return self.v1.grid

    @classmethod
    def zero(cls, grid: GridSpec) -> "TangentPair":
        z = PeriodicField.zero(grid)
        return cls(z, z)

    def __add__(self, other: "TangentPair") -> "TangentPair":
        return TangentPair(self.v1 + other.v1, self.v2 + other.v2)

    def __sub__(self, other: "TangentPair") -> "TangentPair":
        return TangentPair(self.v1 - other.v1, self.v2 - other.v2)

    def __mul__(self, a: float) -> "TangentPair":
        return TangentPair(self.v1 * a, self.v2 * a)

    __rmul__ = __mul__

    def __neg__(self) -> "TangentPair":
        return TangentPair(-self.v1, -self.v2)

    def sup(self) -> float:
        return max(self.v1.sup(), self.v2.sup())


@dataclass(frozen=True)
class GroupPoint:
    """Configuration (phi, f): a circle diffeomorphism and a zero-mean scalar."""

    phi: DiffeoMap
    f: PeriodicField

    def __post_init__(self) -> None:
        if self.f.grid != self.phi.grid:
            raise GridMismatchError("configuration components live on different grids")
        if abs(mean(self.f)) > 1e-12 * (1.0 + self.f.sup()):
            object.__setattr__(self, "f", project_zero_mean(self.f))

    @property
    def grid(self) -> GridSpec:
        return self.phi.grid

    @classmethod
    def identity(cls, grid: GridSpec) -> "GroupPoint":
        return cls(DiffeoMap.identity(grid), PeriodicField.zero(grid))


def _check_same_grid(*pairs: TangentPair) -> None:
    g = pairs[0].grid
    for p in pairs[1:]:
        if p.grid != g:
            raise GridMismatchError("tangent pairs live on different grids")


# ---------------------------------------------------------------------------
# Algebra
# ---------------------------------------------------------------------------


def lie_bracket(u: TangentPair, v: TangentPair) -> TangentPair:
    """Semidirect-product bracket: ([u1, v1], projection of v2_x u1 - u2_x v1)."""
    _check_same_grid(u, v)
    first = multiply(derivative(v.v1), u.v1) - multiply(derivative(u.v1), v.v1)
    second = multiply(derivative(v.v2), u.v1) - multiply(derivative(u.v2), v.v1)
    return TangentPair(first, project_zero_mean(second))


def inertia_apply(u: TangentPair) -> TangentPair:
    """diag(1 - d^2/dx^2, zero-mean projection) on the pair."""
    return TangentPair(apply_helmholtz(u.v1), project_zero_mean(u.v2))


def inertia_invert(w: TangentPair) -> TangentPair:
    """Inverse of the inertia operator on its range."""
    return TangentPair(invert_helmholtz(w.v1), project_zero_mean(w.v2))


# ---------------------------------------------------------------------------
# Metric
# ---------------------------------------------------------------------------


def metric(u: TangentPair, v: TangentPair) -> float:
    """H^1 pairing on velocities plus the mean-free L2 pairing on classes.

    int(u1 v1 + u1' v1' + u2 v2) - mean(u2) mean(v2); representative
    independent because the product of means is subtracted.
    """
    _check_same_grid(u, v)
    val = (
        l2_inner(u.v1, v.v1)
        + l2_inner(derivative(u.v1), derivative(v.v1))
        + l2_inner(u.v2, v.v2)
        - mean(u.v2) * mean(v.v2)
    )
    return val


def metric_norm(u: TangentPair) -> float:
    return float(np.sqrt(max(metric(u, u), 0.0)))


def metric_at(p: GroupPoint, U: TangentPair, V: TangentPair) -> float:
    """Right-invariant extension of the pairing, via the slope-weighted integral.

    Equals metric(U o phi^-1, V o phi^-1) but needs no interpolation:
    int[(U1 V1 + U2 V2) phi' + U1' V1' / phi'] - int(U2 phi') int(V2 phi').
    """
    _check_same_grid(U, V)
    if U.grid != p.grid:
        raise GridMismatchError("tangent pair and base point live on different grids")
    n = p.grid.n
    slope = p.phi.slope().values
    u1, v1 = U.v1.values, V.v1.values
    u2, v2 = U.v2.values, V.v2.values
    u1x = derivative(U.v1).values
    v1x = derivative(V.v1).values
    bulk = np.sum((u1 * v1 + u2 * v2) * slope + u1x * v1x / slope) / n
    return float(bulk - np.sum(u2 * slope) * np.sum(v2 * slope) / n**2)


# ---------------------------------------------------------------------------
# Christoffel operator
# ---------------------------------------------------------------------------


def christoffel(u: TangentPair, v: TangentPair) -> TangentPair:
    """Symmetric bilinear operator generating the geodesic acceleration.

    -1/2 (Ainv d/dx (2 u1 v1 + u1' v1' + u2 v2), [u1' v2 + v1' u2]) with the
    second components taken mean-free, so the value only depends on classes.
    """
    _check_same_grid(u, v)
    u2 = project_zero_mean(u.v2)
    v2 = project_zero_mean(v.v2)
    u1x = derivative(u.v1)
    v1x = derivative(v.v1)
    quad = 2.0 * multiply(u.v1, v.v1) + multiply(u1x, v1x) + multiply(u2, v2)
    first = -0.5 * invert_helmholtz(derivative(quad))
    second = -0.5 * (multiply(u1x, v2) + multiply(v1x, u2))
    return TangentPair(first, project_zero_mean(second))


def compose_pair(U: TangentPair, phi: DiffeoMap) -> TangentPair:
    """Componentwise composition U o phi, re-normalizing the class component."""
    c1, c2 = compose_many([U.v1, U.v2], phi)
    return TangentPair(c1, project_zero_mean(c2))


def christoffel_at(
    p: GroupPoint,
    U: TangentPair,
    V: TangentPair,
    inverse: DiffeoMap | None = None,
) -> TangentPair:
    """Right-invariant extension: christoffel(U o phi^-1, V o phi^-1) o phi.

    A precomputed inverse of p.phi may be supplied to skip the inversion.
    """
    _check_same_grid(U, V)
    if U.grid != p.grid:
        raise GridMismatchError("tangent pair and base point live on different grids")
    psi = inverse if inverse is not None else invert_diffeo(p.phi)
    if V is U:
        u_back = compose_pair(U, psi)
        v_back = u_back
    else:
        c = compose_many([U.v1, U.v2, V.v1, V.v2], psi)
        u_back = TangentPair(c[0], project_zero_mean(c[1]))
        v_back = TangentPair(c[2], project_zero_mean(c[3]))
    g = christoffel(u_back, v_back)
    return compose_pair(g, p.phi)


# ---------------------------------------------------------------------------
# Bilinear operator and identity residuals
# ---------------------------------------------------------------------------


def bilinear_b(u: TangentPair, v: TangentPair) -> TangentPair:
    """The bilinear operator adjoint to the bracket in the kinetic-energy pairing.

    First component  -Ainv(2 v1' Au1 + v1 (Au1)' + v2' u2),
    second component -(u2 v1)' stored mean-free (it is an exact derivative).
    """
    _check_same_grid(u, v)
    u2 = project_zero_mean(u.v2)
    Au1 = apply_helmholtz(u.v1)
    Au1x = derivative(Au1)
    v1x = derivative(v.v1)
    first = -invert_helmholtz(
        2.0 * multiply(v1x, Au1) + multiply(v.v1, Au1x) + multiply(derivative(v.v2), u2)
    )
    second = -derivative(multiply(u2, v.v1))
    return TangentPair(first, second)


def gamma_decomposition_residual(u: TangentPair, v: TangentPair) -> float:
    """Residual of splitting the Christoffel operator through the bilinear one.

    Measures christoffel(u,v) against
    1/2 [((u1 v1)', [u2' v1 + v2' u1]) + B(u,v) + B(v,u)] in the metric norm.
    """
    _check_same_grid(u, v)
    u2 = project_zero_mean(u.v2)
    v2 = project_zero_mean(v.v2)
    transport = TangentPair(
        derivative(multiply(u.v1, v.v1)),
        project_zero_mean(
            multiply(derivative(u2), v.v1) + multiply(derivative(v2), u.v1)
        ),
    )
    rhs = 0.5 * (transport + bilinear_b(u, v) + bilinear_b(v, u))
    return metric_norm(christoffel(u, v) - rhs)


def compatibility_residual(u: TangentPair, v: TangentPair, w: TangentPair) -> float:
    """Absolute value of the six-term metric-compatibility sum (L2 pairings).

    The sum cancels exactly by integration by parts; the returned value is the
    numerical residual of that cancellation.
    """
    _check_same_grid(u, v, w)
    u1, v1, w1 = u.v1, v.v1, w.v1
    u2 = project_zero_mean(u.v2)
    v2 = project_zero_mean(v.v2)
    w2 = project_zero_mean(w.v2)
    total = (
        l2_inner(multiply(derivative(v2), u1), w2)
        + l2_inner(multiply(derivative(w2), u1), v2)
        + 0.5 * l2_inner(derivative(multiply(v2, u2)), w1)
        + 0.5 * l2_inner(derivative(multiply(w2, u2)), v1)
        + 0.5
        * l2_inner(
            multiply(derivative(v1), u2) + multiply(derivative(u1), v2), w2
        )
        + 0.5
        * l2_inner(
            multiply(derivative(w1), u2) + multiply(derivative(u1), w2), v2
        )
    )
    return abs(total)


# ---------------------------------------------------------------------------
# Covariant derivative in the flat chart
# ---------------------------------------------------------------------------


def shift_point(p: GroupPoint, v: TangentPair, eps: float) -> GroupPoint:
    """Move a configuration by eps * v in the flat chart (displacement, scalar)."""
    phi = DiffeoMap(p.grid, p.phi.displacement + eps * v.v1)
    return GroupPoint(phi, p.f + eps * v.v2)


def nabla(Xfn, Yfn, p: GroupPoint, fd_step: float = 1e-4, richardson: bool = False):
    """Covariant derivative of the field Yfn along Xfn at p: DY.X - Gamma_p(X, Y).

    Xfn, Yfn map configurations to tangent pairs; DY.X is a central finite
    difference of Yfn along X(p) in the flat chart (optionally Richardson
    refined with steps h and h/2).
    """
    if fd_step <= 0:
        raise ValueError("fd_step must be positive")
    Xp = Xfn(p)
    Yp = Yfn(p)

    def central(h: float) -> TangentPair:
        plus = Yfn(shift_point(p, Xp, h))
        minus = Yfn(shift_point(p, Xp, -h))
        return (plus - minus) * (0.5 / h)

    dy = central(fd_step)
    if richardson:
        dy = (4.0 * central(fd_step / 2.0) - dy) * (1.0 / 3.0)
    return dy - christoffel_at(p, Xp, Yp)
