import warnings

import numpy as np
import pytest

from pi2ch.curvature import (
    curvature_scan,
    d1_gamma,
    d1_gamma_fd,
    riemann,
    scan_summary,
    sectional_closed,
    sectional_direct,
)
from pi2ch.geometry import TangentPair, metric_norm
from pi2ch.sampling import random_tangent_pair
from pi2ch.spectral import PeriodicField

from conftest import cos_field, sin_field

WORKED_VALUE = np.pi**2 / (1 + 16 * np.pi**2)


def zero(grid):
    return PeriodicField.zero(grid)


class TestD1Gamma:
    def test_zero_direction(self, grid128):
        rng = np.random.default_rng(0)
        w = random_tangent_pair(grid128, rng)
        u = random_tangent_pair(grid128, rng)
        d = d1_gamma(w, u, TangentPair.zero(grid128))
        assert d.sup() == 0.0

    def test_constant_inputs(self, grid128):
        c = TangentPair(PeriodicField.constant(grid128, 0.8), zero(grid128))
        d = d1_gamma(c, c, c)
        assert d.sup() <= 1e-15

    def test_trilinearity_scaling(self, grid128):
        rng = np.random.default_rng(1)
        w = random_tangent_pair(grid128, rng)
        u = random_tangent_pair(grid128, rng)
        v = random_tangent_pair(grid128, rng)
        d = d1_gamma(2.0 * w, 3.0 * u, -1.5 * v) - (-9.0) * d1_gamma(w, u, v)
        assert d.sup() <= 1e-11

    def test_matches_finite_difference(self, grid128):
        rng = np.random.default_rng(2)
        worst = 0.0
        for _ in range(10):
            w = random_tangent_pair(grid128, rng)
            u = random_tangent_pair(grid128, rng)
            v = random_tangent_pair(grid128, rng)
            alg = d1_gamma(w, u, v)
            fd = d1_gamma_fd(w, u, v)
            worst = max(worst, metric_norm(alg - fd) / (1 + metric_norm(alg)))
        assert worst <= 1e-6


class TestRiemann:
    def test_degenerate_plane(self, grid128):
        rng = np.random.default_rng(3)
        u = random_tangent_pair(grid128, rng)
        w = random_tangent_pair(grid128, rng)
        assert metric_norm(riemann(u, u, w)) <= 1e-12

    def test_constant_inputs(self, grid128):
        c = TangentPair(PeriodicField.constant(grid128, 1.0), zero(grid128))
        assert riemann(c, c, c).sup() <= 1e-15

    def test_antisymmetry(self, grid128):
        rng = np.random.default_rng(4)
        for _ in range(10):
            u = random_tangent_pair(grid128, rng)
            v = random_tangent_pair(grid128, rng)
            w = random_tangent_pair(grid128, rng)
            s = riemann(u, v, w) + riemann(v, u, w)
            assert s.sup() <= 1e-10


class TestSectional:
    def test_self_plane_vanishes(self, grid128):
        rng = np.random.default_rng(5)
        u = random_tangent_pair(grid128, rng)
        assert abs(sectional_direct(u, u)) <= 1e-12
        rep = sectional_closed(u, u)
        assert abs(rep.mu_correction) <= 1e-12
        assert abs(rep.s_closed) <= 1e-12

    def test_zero_second_argument(self, grid128):
        rng = np.random.default_rng(6)
        u = random_tangent_pair(grid128, rng)
        assert sectional_direct(u, TangentPair.zero(grid128)) == 0.0

    def test_worked_value_both_routes(self, grid128):
        u = TangentPair(zero(grid128), sin_field(grid128))
        v = TangentPair(zero(grid128), cos_field(grid128))
        rep = sectional_closed(u, v)
        assert rep.s_closed == pytest.approx(WORKED_VALUE, abs=1e-9)
        assert rep.s_direct == pytest.approx(WORKED_VALUE, abs=1e-9)

    def test_ch_reduction_has_no_mu_terms(self, grid128):
        u = TangentPair(sin_field(grid128), zero(grid128))
        v = TangentPair(cos_field(grid128), zero(grid128))
        rep = sectional_closed(u, v)
        assert rep.mu_correction == 0.0

    def test_counterexample_mu_is_pi_squared(self, grid128):
        u = TangentPair(sin_field(grid128), zero(grid128))
        v = TangentPair(zero(grid128), cos_field(grid128))
        rep = sectional_closed(u, v)
        assert rep.mu_correction == pytest.approx(np.pi**2, abs=1e-9)
        assert rep.abs_diff <= 1e-9

    def test_quartic_scaling(self, grid128):
        rng = np.random.default_rng(7)
        u = random_tangent_pair(grid128, rng)
        v = random_tangent_pair(grid128, rng)
        a, b = 1.6, -0.7
        base = sectional_direct(u, v)
        scaled = sectional_direct(a * u, b * v)
        assert scaled == pytest.approx(a**2 * b**2 * base, rel=1e-10)

    def test_symmetry_measured_not_enforced(self, grid128):
        # Symmetry of the plane curvature is observed numerically; a violation
        # is reported as a warning, not a failure.
        rng = np.random.default_rng(8)
        worst = 0.0
        for _ in range(10):
            u = random_tangent_pair(grid128, rng)
            v = random_tangent_pair(grid128, rng)
            worst = max(worst, abs(sectional_direct(u, v) - sectional_direct(v, u)))
        if worst > 1e-9:
            warnings.warn(f"sectional symmetry gap {worst:.3e} exceeds 1e-9")
        assert np.isfinite(worst)


class TestScan:
    def test_degenerate_seeded_pair(self, grid128):
        rng = np.random.default_rng(9)
        u = random_tangent_pair(grid128, rng)
        rep = sectional_closed(u, 3.0 * u)
        assert rep.abs_diff <= 1e-8
        assert abs(rep.s_closed) <= 1e-8

    def test_scan_equivalence(self, grid128):
        reports = curvature_scan(20, seed=7, grid=grid128)
        summary = scan_summary(reports)
        assert summary["max_rel_diff"] <= 1e-7
        assert summary["pair_count"] == 20

    def test_ch_reduced_scan(self, grid128):
        reports = curvature_scan(10, seed=7, grid=grid128, ch_reduced=True)
        assert max(abs(r.mu_correction) for r in reports) <= 1e-12

    def test_deterministic_per_seed(self, grid128):
        a = curvature_scan(5, seed=3, grid=grid128)
        b = curvature_scan(5, seed=3, grid=grid128)
        assert all(x == y for x, y in zip(a, b))

    def test_workers_do_not_change_results(self, grid128):
        a = curvature_scan(6, seed=5, grid=grid128, workers=1)
        b = curvature_scan(6, seed=5, grid=grid128, workers=4)
        assert all(x == y for x, y in zip(a, b))

    def test_rejects_empty_scan(self, grid128):
        with pytest.raises(ValueError):
            curvature_scan(0, seed=1, grid=grid128)
