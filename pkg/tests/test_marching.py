import time

import numpy as np
import pytest
from scipy import special

from heat_potentials.domain.DensityPair import DensityPair
from heat_potentials.domain.DensityPanel import DensityPanel
from heat_potentials.domain.DensityRepresentation import DensityRepresentation
from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.domain.MarchSettings import MarchSettings
from heat_potentials.domain.MovingDomain import MovingDomain
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.PotentialSnapshot import PotentialSnapshot
from heat_potentials.exceptions import InvalidSpec, NonPositiveTime, OnBoundary
from heat_potentials.marching import (
    boundary_flux,
    build_adaptive_mesh,
    dlhp_eval,
    dlhp_values,
    history_advance,
    march,
    mesh_alpha,
    snapshot_frame,
    spacing_cap_factor,
)
from heat_potentials.use_cases.dirichlet_heat import volterra_benchmark


def _constant_density(value, horizon=0.5):
    panels = (
        DensityPanel(zone=DensityZone.EXPONENTIAL, lo=1e-8, hi=0.02, coeffs=[value]),
        DensityPanel(zone=DensityZone.NORMAL, lo=0.02, hi=horizon, coeffs=[value]),
    )
    return DensityRepresentation(tC=1e-8, t0=0.02, constant_value=value, panels=panels)


def _unit_interval_potential(x, t):
    # D[1] on the static interval (0, 1)
    return -0.5 * special.erfc(x / (2 * np.sqrt(t))) - 0.5 * special.erfc((1 - x) / (2 * np.sqrt(t)))


@pytest.fixture(scope="module")
def unit_pair():
    rep = _constant_density(1.0)
    return DensityPair(a=rep, b=rep)


@pytest.fixture(scope="module")
def unit_interval():
    return MovingDomain.static(0.0, 1.0, 0.5)


def test_alpha_for_small_times():
    assert mesh_alpha(1e-8, 16, 1e-10) == pytest.approx(2.23, abs=0.01)


def test_alpha_shrinks_slowly_for_large_times():
    assert spacing_cap_factor(1e8, 16) == pytest.approx(1.187, abs=1e-3)
    assert mesh_alpha(1e8, 16, 1e-10) == pytest.approx(mesh_alpha(1.0, 16, 1e-10) / spacing_cap_factor(1e8, 16))


def test_mesh_has_boundary_edges_and_balanced_widths():
    domain, _ = volterra_benchmark()
    t = 0.3
    mesh = build_adaptive_mesh(domain, t)
    a_t, b_t = domain.ends(t)
    assert np.any(np.isclose(mesh.edges, a_t, rtol=0, atol=1e-14))
    assert np.any(np.isclose(mesh.edges, b_t, rtol=0, atol=1e-14))
    widths = np.diff(mesh.edges)
    ratios = widths[1:] / widths[:-1]
    assert np.all(ratios <= 2 + 1e-9) and np.all(ratios >= 0.5 - 1e-9)
    lo, hi = domain.hull(t)
    reach = 14 * np.sqrt(t)
    assert mesh.support[0] <= lo - reach + 1e-12
    assert mesh.support[1] >= hi + reach - 1e-12


def test_near_spacing_follows_alpha(unit_interval):
    mesh = build_adaptive_mesh(unit_interval, 1e-3)
    assert mesh.near_spacing == pytest.approx(mesh.alpha * np.sqrt(1e-3))
    inner = np.diff(mesh.edges[(mesh.edges >= 0) & (mesh.edges <= 1)])
    assert np.all(inner <= mesh.near_spacing * (1 + 1e-12))


def test_interval_count_does_not_grow_on_a_static_domain(unit_interval):
    counts = [build_adaptive_mesh(unit_interval, t).n_intervals for t in np.geomspace(1e-4, 0.1, 8)]
    assert all(later <= earlier + 2 for earlier, later in zip(counts, counts[1:]))


def test_direct_evaluation_matches_closed_form(unit_pair, unit_interval):
    for x, t in [(0.3, 0.5), (0.05, 0.01), (0.9, 0.2)]:
        assert dlhp_eval(unit_pair, unit_interval, x, t) == pytest.approx(_unit_interval_potential(x, t), abs=1e-9)
    x = np.array([0.2, 0.5, 0.7])
    values = dlhp_values(unit_pair, unit_interval, x, 0.3)
    np.testing.assert_allclose(values, _unit_interval_potential(x, 0.3), atol=1e-9)


def test_direct_evaluation_errors(unit_pair, unit_interval):
    with pytest.raises(OnBoundary):
        dlhp_eval(unit_pair, unit_interval, 1.0, 0.2)
    with pytest.raises(NonPositiveTime):
        dlhp_eval(unit_pair, unit_interval, 0.5, 0.0)


def test_march_matches_direct_evaluation(unit_pair, unit_interval):
    times = np.array([0.1, 0.15, 0.2, 0.25])
    snapshots = march(unit_pair, unit_interval, times)
    assert [s.t for s in snapshots] == pytest.approx(list(times))
    x = np.linspace(0.05, 0.95, 10)
    np.testing.assert_allclose(snapshots[-1].values(x), _unit_interval_potential(x, 0.25), atol=1e-7)
    frame = snapshot_frame(snapshots)
    assert list(frame.columns) == ["t", "node", "value"]
    assert sorted(frame["t"].unique()) == pytest.approx(list(times))


def test_march_needs_uniform_steps(unit_pair, unit_interval):
    with pytest.raises(InvalidSpec):
        march(unit_pair, unit_interval, [0.1, 0.2, 0.4], MarchSettings(lam=1.0, mu=1.0))


def test_flux_of_a_constant_density(unit_interval):
    # u = erfc(x / 2 sqrt(t)) near x = 0 has u_x(0) = -1 / sqrt(pi t)
    zero = _constant_density(0.0)
    pair = DensityPair(a=_constant_density(-2.0), b=zero)
    wide = MovingDomain.static(0.0, 10.0, 0.5)
    t = 0.1
    assert boundary_flux(pair, wide, None, t, side="a") == pytest.approx(-1 / np.sqrt(np.pi * t), rel=1e-8)


def test_flux_of_the_initial_data(table16):
    zero = _constant_density(0.0)
    pair = DensityPair(a=zero, b=zero)
    f = PiecewiseChebFunction(breakpoints=[0.0, 1.0], coeffs=[[1.0]])
    t = 0.1
    expected = 0.5 * (np.exp(-1 / (4 * t)) - 1.0) / np.sqrt(np.pi * t)
    domain = MovingDomain.static(0.0, 1.0, 0.5)
    assert boundary_flux(pair, domain, f, t, table=table16) == pytest.approx(expected, rel=1e-9)


def _bump_snapshot(domain, t, s):
    mesh = build_adaptive_mesh(domain, t)
    values = PiecewiseChebFunction.from_function(lambda z: np.exp(-((z - 0.5) ** 2) / (4 * s)), mesh.edges, mesh.order)
    return PotentialSnapshot(t=t, mesh=mesh, values=values)


def _advanced(prev, domain, dt, table):
    mesh = build_adaptive_mesh(domain, prev.t + dt)
    values = history_advance(prev, mesh, dt, table)
    return PotentialSnapshot(
        t=prev.t + dt, mesh=mesh, values=PiecewiseChebFunction.from_node_values(mesh.edges, values)
    )


def test_history_step_composes_gaussians(unit_interval, table16):
    s, dt = 0.04, 0.02
    prev = _bump_snapshot(unit_interval, 0.1, s)
    mesh = build_adaptive_mesh(unit_interval, 0.12)
    nodes = mesh.nodes
    expected = np.sqrt(s / (s + dt)) * np.exp(-((nodes - 0.5) ** 2) / (4 * (s + dt)))
    np.testing.assert_allclose(history_advance(prev, mesh, dt, table16), expected, atol=1e-10)


def test_two_history_steps_equal_one_double_step(unit_interval, table16):
    prev = _bump_snapshot(unit_interval, 0.1, 0.04)
    twice = _advanced(_advanced(prev, unit_interval, 0.02, table16), unit_interval, 0.02, table16)
    once = history_advance(prev, twice.mesh, 0.04, table16)
    np.testing.assert_allclose(twice.values(twice.mesh.nodes.ravel()), once.ravel(), atol=1e-9)


def test_history_steps_never_raise_the_maximum(unit_interval, table16):
    snapshot = _bump_snapshot(unit_interval, 0.1, 0.01)
    peaks = []
    for _ in range(4):
        peaks.append(np.max(np.abs(snapshot.values(snapshot.mesh.nodes.ravel()))))
        snapshot = _advanced(snapshot, unit_interval, 0.05, table16)
    assert np.all(np.diff(peaks) < 0)


@pytest.mark.slow
def test_march_cost_is_linear_in_the_step_count(unit_pair, unit_interval):
    settings = MarchSettings(lam=1.0, mu=1.0)
    seconds, counts = [], []
    for steps in (200, 400):
        tic = time.perf_counter()
        snapshots = march(unit_pair, unit_interval, np.linspace(0.1, 0.3, steps + 1), settings)
        seconds.append(time.perf_counter() - tic)
        counts.append([snapshot.mesh.n_intervals for snapshot in snapshots])
    assert seconds[1] / seconds[0] <= 2.5
    for run in counts:
        assert max(run) <= run[0] + 2
