"""Pseudo-spectral laboratory for the periodic two-component pi-Camassa-Holm
system: Eulerian and geodesic integrators, conservation monitoring, and
numerical verification of the underlying geometric identities and the
closed-form sectional curvature."""

from .curvature import (
    CurvatureReport,
    curvature_scan,
    d1_gamma,
    d1_gamma_fd,
    riemann,
    scan_summary,
    sectional_closed,
    sectional_direct,
)
from .diffeo import (
    DiffeoBreakdownError,
    DiffeoMap,
    compose,
    compose_diffeo,
    compose_many,
    evaluate,
    invert_diffeo,
)
from .geometry import (
    GroupPoint,
    TangentPair,
    bilinear_b,
    christoffel,
    christoffel_at,
    compatibility_residual,
    gamma_decomposition_residual,
    inertia_apply,
    inertia_invert,
    lie_bracket,
    metric,
    metric_at,
    metric_norm,
    nabla,
    shift_point,
)
from .solver import (
    DiagnosticsRecord,
    EulerianState,
    IntegrationResult,
    LagrangianState,
    SolverConfig,
    eulerian_rhs,
    integrate_eulerian,
    integrate_lagrangian,
    lagrangian_rhs,
    monitors,
    reconstruct_eulerian,
    smooth_dependence_probe,
    step_rk4,
)
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
    sobolev_norm,
)

__version__ = "0.1.0"
