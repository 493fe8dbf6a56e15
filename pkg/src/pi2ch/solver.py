"""Time integration of the two-component system in both formulations.

The Eulerian form evolves (u, r) with r the zero-mean class representative;
the Lagrangian form evolves the flow map and scalar potential as a second-order
geodesic equation driven by the conjugated Christoffel operator.  Both runs
record per-step diagnostics: kinetic energy, the two Lagrangian conservation
residuals, the mean of r, and the minimum slope of the flow map.  The Eulerian
integrator carries the flow map alongside (u, r) so that the same diagnostics
are available for it; the (u, r) evolution itself never feeds on the map.

Integration uses classical fixed-step RK4 and halts with a flagged reason on
wave breaking (flow-map slope at the configured floor) or instability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .diffeo import DiffeoBreakdownError, DiffeoMap, compose_many, invert_diffeo
from .geometry import GroupPoint, TangentPair, christoffel_at, metric
from .spectral import (
    GridSpec,
    PeriodicField,
    apply_helmholtz,
    derivative,
    invert_helmholtz,
    mean,
    project_zero_mean,
)

HALT_COMPLETED = "completed"
HALT_WAVE_BREAKING = "wave_breaking"
HALT_INSTABILITY = "instability"


@dataclass(frozen=True)
class EulerianState:
    t: float
    u: PeriodicField
    r: PeriodicField

    def __post_init__(self) -> None:
        if self.u.grid != self.r.grid:
            raise ValueError("state components live on different grids")
        if abs(mean(self.r)) > 1e-12 * (1.0 + self.r.sup()):
            object.__setattr__(self, "r", project_zero_mean(self.r))


@dataclass(frozen=True)
class LagrangianState:
    t: float
    phi: DiffeoMap
    f: PeriodicField
    phi_t: PeriodicField
    f_t: PeriodicField


@dataclass(frozen=True)
class SolverConfig:
    grid: GridSpec
    dt: float
    t_end: float
    scheme: str = "rk4"
    min_phix_floor: float = 1e-4
    snapshot_stride: int = 10
    diagnostics_stride: int = 1
    sup_ceiling: float = 1e3

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end < 0:
            raise ValueError("t_end must be >= 0")
        if self.scheme != "rk4":
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.snapshot_stride < 1 or self.diagnostics_stride < 1:
            raise ValueError("strides must be >= 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_end / self.dt))


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    energy: float
    m1_residual: float
    m2_residual: float
    mean_r: float
    min_phi_x: float


@dataclass(frozen=True)
class IntegrationResult:
    states: list
    diagnostics: list
    halt_reason: str
    t_final: float

    @property
    def completed(self) -> bool:
        return self.halt_reason == HALT_COMPLETED


# ---------------------------------------------------------------------------
# Right-hand sides
# ---------------------------------------------------------------------------


def eulerian_rhs(s: EulerianState) -> tuple[PeriodicField, PeriodicField]:
    """du/dt = -u u' - 1/2 Ainv d/dx (2u^2 + u'^2 + r^2), dr/dt = -(r u)'.

    dr/dt is an exact derivative, so its mean vanishes identically and the
    scheme preserves mean(r) = 0 to round-off.
    """
    return _eulerian_core(s.u, s.r)


def _eulerian_core(
    u: PeriodicField, r: PeriodicField, include_density: bool = True
) -> tuple[PeriodicField, PeriodicField]:
    ux = derivative(u)
    quad = 2.0 * (u * u) + ux * ux
    if include_density:
        quad = quad + r * r
    du = -(u * ux) - 0.5 * invert_helmholtz(derivative(quad))
    dr = -derivative(r * u)
    return du, dr


def momentum_rhs(s: EulerianState) -> tuple[PeriodicField, PeriodicField]:
    """The momentum form dm/dt = -m'u - 2u'm - r r', m = u - u''; oracle for
    consistency of the two Eulerian writings under the inertia operator."""
    m = apply_helmholtz(s.u)
    ux = derivative(s.u)
    dm = -(derivative(m) * s.u) - 2.0 * (ux * m) - s.r * derivative(s.r)
    dr = -derivative(s.r * s.u)
    return dm, dr


def lagrangian_rhs(
    s: LagrangianState, min_phix_floor: float = 1e-4
) -> tuple[PeriodicField, PeriodicField]:
    """Geodesic acceleration: the conjugated Christoffel operator on the velocity.

    Raises DiffeoBreakdownError when the flow-map slope reaches the floor.
    """
    if s.phi.min_slope() <= min_phix_floor:
        raise DiffeoBreakdownError(
            f"flow map slope {s.phi.min_slope():.3e} at floor {min_phix_floor:.1e}"
        )
    vel = TangentPair(s.phi_t, s.f_t)
    acc = christoffel_at(GroupPoint(s.phi, s.f), vel, vel)
    return acc.v1, acc.v2


# ---------------------------------------------------------------------------
# RK4 stepping on tuples of fields
# ---------------------------------------------------------------------------


def step_rk4(state: tuple, rhs, dt: float) -> tuple:
    """One classical 4-stage Runge-Kutta step on a tuple of field components."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    k1 = rhs(state)
    k2 = rhs(_shifted(state, k1, 0.5 * dt))
    k3 = rhs(_shifted(state, k2, 0.5 * dt))
    k4 = rhs(_shifted(state, k3, dt))
    sixth = dt / 6.0
    return tuple(
        s + sixth * (a + 2.0 * b + 2.0 * c + d)
        for s, a, b, c, d in zip(state, k1, k2, k3, k4)
    )


def _shifted(state: tuple, k: tuple, h: float) -> tuple:
    return tuple(s + h * ki for s, ki in zip(state, k))


# ---------------------------------------------------------------------------
# Reconstruction and conservation monitors
# ---------------------------------------------------------------------------


def reconstruct_eulerian(
    s: LagrangianState, inverse: DiffeoMap | None = None
) -> EulerianState:
    """(u, r) = velocity composed with the inverse flow map, r re-normalized."""
    psi = inverse if inverse is not None else invert_diffeo(s.phi)
    u, f_t_back = compose_many([s.phi_t, s.f_t], psi)
    return EulerianState(t=s.t, u=u, r=project_zero_mean(f_t_back))


def monitors(
    s: LagrangianState,
    m0: PeriodicField,
    r0: PeriodicField,
    inverse: DiffeoMap | None = None,
) -> DiagnosticsRecord:
    """Conservation residuals of a Lagrangian state against the initial data.

    m0 must be the Helmholtz image of the initial velocity, r0 the initial
    zero-mean density representative.
    """
    eul = reconstruct_eulerian(s, inverse=inverse)
    return _conservation_record(eul.u, eul.r, s.phi, s.f, s.t, m0, r0)


def _conservation_record(
    u: PeriodicField,
    r: PeriodicField,
    phi: DiffeoMap,
    f: PeriodicField,
    t: float,
    m0: PeriodicField,
    r0: PeriodicField,
) -> DiagnosticsRecord:
    # Pointwise (non-dealiased) products: these are sup-norm residuals of
    # pointwise conservation laws, not spectral quantities.
    m = apply_helmholtz(u)
    m_phi, r_phi = (g.values for g in compose_many([m, r], phi))
    phix = phi.slope().values
    fx = derivative(f).values
    m1 = float(np.max(np.abs(m_phi * phix**2 + r_phi * fx * phix - m0.values)))
    m2 = float(np.max(np.abs(r_phi * phix - r0.values)))
    pair = TangentPair(u, r)
    return DiagnosticsRecord(
        t=t,
        energy=metric(pair, pair),
        m1_residual=m1,
        m2_residual=m2,
        mean_r=mean(r),
        min_phi_x=phi.min_slope(),
    )


# ---------------------------------------------------------------------------
# Integrators
# ---------------------------------------------------------------------------


def _is_unstable(fields: tuple, ceiling: float) -> bool:
    for f in fields:
        m = float(np.max(np.abs(f.values)))
        if not math.isfinite(m) or m > ceiling:
            return True
    return False


def integrate_eulerian(s0: EulerianState, cfg: SolverConfig) -> IntegrationResult:
    """Fixed-step RK4 trajectory of (u, r) with the flow map carried for diagnostics."""
    grid = cfg.grid
    if s0.u.grid != grid:
        raise ValueError("initial state grid differs from solver grid")
    m0 = apply_helmholtz(s0.u)
    r0 = s0.r
    floor = cfg.min_phix_floor

    def rhs(y: tuple) -> tuple:
        u, r, d, f = y
        if 1.0 + float(np.min(derivative(d).values)) <= floor:
            raise DiffeoBreakdownError("flow-map slope at floor")
        du, dr = _eulerian_core(u, r)
        phi = DiffeoMap(grid, d)
        u_phi, r_phi = compose_many([u, r], phi)
        return du, dr, u_phi, project_zero_mean(r_phi)

    zero = PeriodicField.zero(grid)
    y = (s0.u, s0.r, zero, zero)
    states = [replace(s0, t=0.0)]
    diagnostics = [
        _conservation_record(s0.u, s0.r, DiffeoMap.identity(grid), zero, 0.0, m0, r0)
    ]
    halt = HALT_COMPLETED
    t = 0.0
    for i in range(1, cfg.n_steps + 1):
        try:
            y = step_rk4(y, rhs, cfg.dt)
        except DiffeoBreakdownError:
            halt = HALT_WAVE_BREAKING
            break
        t = i * cfg.dt
        if _is_unstable(y[:2], cfg.sup_ceiling):
            halt = HALT_INSTABILITY
            break
        u, r, d, f = y
        if i % cfg.diagnostics_stride == 0 or i == cfg.n_steps:
            diagnostics.append(
                _conservation_record(u, r, DiffeoMap(grid, d), f, t, m0, r0)
            )
        if i % cfg.snapshot_stride == 0 or i == cfg.n_steps:
            states.append(EulerianState(t=t, u=u, r=r))
    return IntegrationResult(states, diagnostics, halt, t)


def integrate_lagrangian(u0: TangentPair, cfg: SolverConfig) -> IntegrationResult:
    """Geodesic trajectory from the identity configuration with velocity u0."""
    grid = cfg.grid
    if u0.grid != grid:
        raise ValueError("initial velocity grid differs from solver grid")
    m0 = apply_helmholtz(u0.v1)
    r0 = u0.v2
    floor = cfg.min_phix_floor
    # Stage flow maps differ by O(dt): warm-start each inversion from the last.
    hint = {"z": None}

    def _invert(phi: DiffeoMap) -> DiffeoMap:
        psi = invert_diffeo(phi, initial=hint["z"])
        hint["z"] = psi.displacement.values
        return psi

    def rhs(y: tuple) -> tuple:
        d, f, pt, ft = y
        if 1.0 + float(np.min(derivative(d).values)) <= floor:
            raise DiffeoBreakdownError("flow-map slope at floor")
        phi = DiffeoMap(grid, d)
        acc = christoffel_at(
            GroupPoint(phi, f), TangentPair(pt, ft), TangentPair(pt, ft),
            inverse=_invert(phi),
        )
        return pt, ft, acc.v1, acc.v2

    zero = PeriodicField.zero(grid)
    y = (zero, zero, u0.v1, u0.v2)
    s0 = LagrangianState(0.0, DiffeoMap.identity(grid), zero, u0.v1, u0.v2)
    states = [s0]
    diagnostics = [monitors(s0, m0, r0)]
    halt = HALT_COMPLETED
    t = 0.0
    for i in range(1, cfg.n_steps + 1):
        try:
            y = step_rk4(y, rhs, cfg.dt)
        except DiffeoBreakdownError:
            halt = HALT_WAVE_BREAKING
            break
        t = i * cfg.dt
        # Gauge: keep the scalar class representatives mean-free.
        d, f, pt, ft = y
        y = (d, project_zero_mean(f), pt, project_zero_mean(ft))
        if _is_unstable((pt, ft), cfg.sup_ceiling):
            halt = HALT_INSTABILITY
            break
        state = LagrangianState(t, DiffeoMap(grid, y[0]), y[1], y[2], y[3])
        if i % cfg.diagnostics_stride == 0 or i == cfg.n_steps:
            diagnostics.append(monitors(state, m0, r0, inverse=_invert(state.phi)))
        if i % cfg.snapshot_stride == 0 or i == cfg.n_steps:
            states.append(state)
    return IntegrationResult(states, diagnostics, halt, t)


# ---------------------------------------------------------------------------
# Dependence probe
# ---------------------------------------------------------------------------


def default_perturbation(grid: GridSpec) -> TangentPair:
    x = grid.x
    return TangentPair(
        PeriodicField(grid, np.cos(2.0 * np.pi * x)),
        PeriodicField(grid, np.sin(4.0 * np.pi * x)),
    )


def smooth_dependence_probe(
    u0: TangentPair,
    eps: float,
    cfg: SolverConfig,
    perturbation: TangentPair | None = None,
) -> float:
    """Sup-norm distance at t_end between runs from u0 and u0 + eps * perturbation.

    The ratio distance/eps stabilizes as eps shrinks when the flow linearizes.
    """
    if not 0.0 <= eps <= 0.1:
        raise ValueError("eps must lie in [0, 0.1]")
    if eps == 0.0:
        return 0.0
    pert = perturbation if perturbation is not None else default_perturbation(cfg.grid)
    base = integrate_eulerian(EulerianState(0.0, u0.v1, u0.v2), cfg)
    moved = integrate_eulerian(
        EulerianState(0.0, u0.v1 + eps * pert.v1, u0.v2 + eps * pert.v2), cfg
    )
    ub, rb = base.states[-1].u, base.states[-1].r
    um, rm = moved.states[-1].u, moved.states[-1].r
    return max((um - ub).sup(), (rm - rb).sup())
