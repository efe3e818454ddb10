from functools import lru_cache

import numpy as np
import pytest
from scipy import special

from heat_potentials.domain.BoundaryData import BoundaryData
from heat_potentials.domain.CollocationGrid import CollocationGrid
from heat_potentials.domain.DensityPanel import DensityPanel
from heat_potentials.domain.DensityRepresentation import DensityRepresentation
from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.domain.LocalIntegralSpec import LocalIntegralSpec
from heat_potentials.domain.MovingDomain import MovingDomain
from heat_potentials.domain.PanelPlan import PanelPlan
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.VolterraSettings import VolterraSettings
from heat_potentials.exceptions import PanelPlanGap, SingularSystem
from heat_potentials.marching import dlhp_eval
from heat_potentials.oracle import oracle_history_integral
from heat_potentials.use_cases.dirichlet_heat import volterra_benchmark
from heat_potentials.volterra import (
    _solve,
    assemble_panel_system,
    assemble_rhs,
    density_residual,
    eval_density,
    solve_density,
    zone_one,
)


def _ones(t):
    return np.ones(np.shape(t)) if np.ndim(t) else 1.0


def _zeros(t):
    return np.zeros(np.shape(t)) if np.ndim(t) else 0.0


def _heated_interval(t, x=0.5, terms=50):
    # u = 1 on both walls of (0, 1), u = 0 at t = 0
    n = 2 * np.arange(terms) + 1
    return 1.0 - np.sum(4.0 / (n * np.pi) * np.sin(n * np.pi * x) * np.exp(-((n * np.pi) ** 2) * t))


def test_rhs_of_constant_initial_data(table16):
    domain = MovingDomain.static(-1.0, 1.0, 1.0)
    f = PiecewiseChebFunction(breakpoints=[-1.0, 1.0], coeffs=[[1.0]])
    data = BoundaryData(g_a=_zeros, g_b=_zeros, f=f)
    # 2 J[1](-1, 0.01) = erf(10)
    np.testing.assert_allclose(assemble_rhs(domain, data, 0.01, table16), special.erf(10.0), atol=1e-12)


def test_direct_rhs():
    domain, data = volterra_benchmark()
    np.testing.assert_allclose(assemble_rhs(domain, data, 0.05), [1.0, 1.0 - special.j1(0.5)], atol=1e-15)


def test_compatible_data_gives_vanishing_densities(table16):
    domain = MovingDomain.static(-1.0, 1.0, 0.05)
    f = PiecewiseChebFunction(breakpoints=[-1.0, 1.0], coeffs=[[1.0]])
    data = BoundaryData(
        g_a=lambda t: 0.5 * special.erf(1.0 / np.sqrt(t)), g_b=lambda t: 0.5 * special.erf(1.0 / np.sqrt(t)), f=f
    )
    plan = PanelPlan.uniform(1e-8, 0.02, 0.05, 3, 2)
    density = solve_density(domain, data, plan, VolterraSettings(L=4, M=4), table16)
    t = np.linspace(0.001, 0.05, 9)
    assert np.max(np.abs(density.a(t))) < 1e-8
    assert np.max(np.abs(density.b(t))) < 1e-8


def test_zero_data_gives_zero_density():
    domain = MovingDomain.static(0.0, 1.0, 0.1)
    data = BoundaryData(g_a=_zeros, g_b=_zeros)
    plan = PanelPlan.uniform(1e-8, 0.02, 0.1, 2, 2)
    density = solve_density(domain, data, plan, VolterraSettings(L=4, M=4))
    assert density.a.constant_value == 0.0 and density.b.constant_value == 0.0
    for panel in density.a.panels + density.b.panels:
        np.testing.assert_allclose(panel.coeffs, 0.0, atol=1e-15)


def test_half_space_density():
    # far walls do not see each other: phi_a = -2 g_a exactly
    domain = MovingDomain.static(0.0, 10.0, 0.1)
    data = BoundaryData(g_a=_ones, g_b=_zeros)
    plan = PanelPlan.uniform(1e-8, 0.02, 0.1, 4, 2)
    density = solve_density(domain, data, plan, VolterraSettings(L=6, M=6))
    t = np.geomspace(1e-7, 0.1, 12)
    np.testing.assert_allclose(density.a(t), -2.0, atol=1e-6)
    np.testing.assert_allclose(density.b(t), 0.0, atol=1e-6)


@pytest.mark.slow
def test_heated_interval_solution():
    domain = MovingDomain.static(0.0, 1.0, 0.2)
    data = BoundaryData(g_a=_ones, g_b=_ones)
    plan = PanelPlan.uniform(1e-8, 0.02, 0.2, 6, 4)
    density = solve_density(domain, data, plan, VolterraSettings(L=8, M=8))
    assert dlhp_eval(density, domain, 0.5, 0.2) == pytest.approx(_heated_interval(0.2), abs=1e-6)
    residual = density_residual(domain, data, density, [0.031, 0.077, 0.143, 0.19])
    assert np.max(np.abs(residual)) < 1e-6


def test_zone_one_of_static_walls():
    domain = MovingDomain.static(0.0, 10.0, 0.1)
    data = BoundaryData(g_a=_ones, g_b=_zeros)
    density = zone_one(domain, data, 1e-8, 0.02, VolterraSettings())
    assert density.a.constant_value == pytest.approx(-2.0, abs=1e-12)
    assert density.b.constant_value == pytest.approx(0.0, abs=1e-12)


def test_panel_system_shape_and_gap():
    domain, data = volterra_benchmark(0.1)
    settings = VolterraSettings(L=5, M=3)
    density = zone_one(domain, data, 1e-8, 0.02, settings)
    matrix, rhs, points = assemble_panel_system(
        domain, data, density, DensityZone.EXPONENTIAL, 1e-8, 1e-6, settings
    )
    assert matrix.shape == (12, 8)
    assert rhs.shape == (12,)
    assert points[0] == 1e-8 and points[-1] == 1e-6
    with pytest.raises(PanelPlanGap):
        assemble_panel_system(domain, data, density, DensityZone.EXPONENTIAL, 1e-6, 1e-5, settings)


def test_singular_system():
    with pytest.raises(SingularSystem):
        _solve(np.zeros((2, 2)), np.zeros(2), "test")


def test_exponential_collocation_points_are_log_symmetric():
    points = CollocationGrid(zone=DensityZone.EXPONENTIAL, lo=1e-8, hi=1e-4, L=8, M=8).points
    logs = np.log(points)
    np.testing.assert_allclose(logs + logs[::-1], np.log(1e-8) + np.log(1e-4), atol=1e-12)
    assert points[4] == pytest.approx(1e-6, rel=1e-12)


def test_eval_density_by_zone():
    panel = DensityPanel(zone=DensityZone.EXPONENTIAL, lo=1e-8, hi=1e-4, coeffs=[1.0, 0.5])
    rep = DensityRepresentation(tC=1e-8, t0=0.02, constant_value=3.0, panels=(panel,))
    assert eval_density(rep, 5e-9) == 3.0
    # the log-time coordinate is 0 at the geometric midpoint
    assert eval_density(rep, 1e-6) == pytest.approx(1.0)
    assert eval_density(rep, 1e-4) == pytest.approx(1.5)


def test_exponential_panel_resolves_square_root():
    lo, hi = 1e-8, 0.02
    x = np.cos(np.pi * (np.arange(17) + 0.5) / 17)
    t = np.exp(np.log(lo) + (np.log(hi) - np.log(lo)) * (x + 1) / 2)
    coeffs = np.polynomial.chebyshev.chebfit(x, np.sqrt(t), 16)
    panel = DensityPanel(zone=DensityZone.EXPONENTIAL, lo=lo, hi=hi, coeffs=coeffs)
    samples = np.geomspace(lo, hi, 50)
    np.testing.assert_allclose(panel(samples), np.sqrt(samples), atol=1e-6)


def _manufactured():
    # known densities on the moving benchmark walls; h = phi - 2 D_pv[phi] by oracle quadrature
    domain, _ = volterra_benchmark(1.0)
    phi = {"a": lambda s: 1.0 + s, "b": lambda s: 0.5 - s**2}
    signs = {"a": -1.0, "b": 1.0}

    @lru_cache(maxsize=None)
    def rhs(t):
        h = []
        for wall in ("a", "b"):
            y = float(domain.boundary(wall)(t))
            potential = sum(
                signs[side]
                * oracle_history_integral(
                    LocalIntegralSpec(y=y, gamma=domain.boundary(side), phi=phi[side], a=t, b=t, eps=0.5 * t)
                )
                for side in ("a", "b")
            )
            h.append(phi[wall](t) - 2.0 * potential)
        return tuple(h)

    data = BoundaryData(h_a=lambda t: rhs(float(t))[0], h_b=lambda t: rhs(float(t))[1])
    return domain, data, phi


@pytest.mark.slow
def test_manufactured_densities_are_recovered():
    domain, data, phi = _manufactured()
    plan = PanelPlan.uniform(1e-8, 0.02, 1.0, 8, 16)
    density = solve_density(domain, data, plan, VolterraSettings(L=8, M=8))
    t = np.linspace(0.02, 1.0, 25)
    assert np.max(np.abs(density.a(t) - phi["a"](t))) <= 1e-8
    assert np.max(np.abs(density.b(t) - phi["b"](t))) <= 1e-8
