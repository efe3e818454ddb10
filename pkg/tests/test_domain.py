import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from heat_potentials.domain.AdaptiveMesh import AdaptiveMesh
from heat_potentials.domain.DensityPanel import DensityPanel
from heat_potentials.domain.DensityRepresentation import DensityRepresentation
from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.domain.ExperimentConfig import ExperimentConfig
from heat_potentials.domain.HeatProblem import HeatProblem
from heat_potentials.domain.MovingDomain import MovingDomain
from heat_potentials.domain.PanelPlan import PanelPlan
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.ProblemVariant import ProblemVariant
from heat_potentials.domain.SoeTable import SoeTable
from heat_potentials.domain.Trajectory import Trajectory
from heat_potentials.exceptions import (
    ConfigInvalid,
    DegeneratePiece,
    InvalidSpec,
    OutOfRange,
    PanelPlanGap,
    UnsortedInput,
)


@pytest.fixture(scope="module")
def cubic():
    return PiecewiseChebFunction.from_function(lambda x: x**3 - x, [-1.0, 0.0, 0.5, 2.0], 5)


def test_interpolation_is_exact_for_polynomials(cubic):
    x = np.linspace(-1, 2, 13)
    np.testing.assert_allclose(cubic(x), x**3 - x, atol=1e-13)
    np.testing.assert_allclose(cubic.derivative()(x), 3 * x**2 - 1, atol=1e-12)
    assert cubic.integral() == pytest.approx(2.0**4 / 4 - 2.0 - (0.25 - 0.5), abs=1e-13)


def test_zero_outside_unless_extrapolated(cubic):
    assert cubic(3.0) == 0.0
    assert cubic(3.0, extrapolate=True) == pytest.approx(24.0)


def test_breakpoints_use_the_right_piece_by_default():
    f = PiecewiseChebFunction(breakpoints=[0.0, 1.0, 2.0], coeffs=[[1.0], [5.0]])
    assert f(1.0) == 5.0
    assert f(1.0, side="left") == 1.0
    points, jumps = f.jumps()
    np.testing.assert_allclose(points, [1.0])
    np.testing.assert_allclose(jumps, [4.0])


@given(lo=st.floats(min_value=-0.9, max_value=0.4), width=st.floats(min_value=0.05, max_value=1.0))
def test_restriction_keeps_values(cubic, lo, width):
    piece = cubic.restrict(lo, lo + width)
    x = np.linspace(*piece.domain, 7)
    np.testing.assert_allclose(piece(x), x**3 - x, atol=1e-12)


def test_piecewise_validation():
    with pytest.raises(UnsortedInput):
        PiecewiseChebFunction(breakpoints=[1.0, 0.0], coeffs=[[1.0]])
    with pytest.raises(DegeneratePiece):
        PiecewiseChebFunction(breakpoints=[0.0, 0.0, 1.0], coeffs=[[1.0], [1.0]])
    with pytest.raises(InvalidSpec):
        PiecewiseChebFunction(breakpoints=[0.0, 1.0], coeffs=[[1.0], [2.0]])
    with pytest.raises(InvalidSpec, match="two breakpoints"):
        PiecewiseChebFunction(breakpoints=[0.0], coeffs=[])


def test_moving_domain_ordering():
    with pytest.raises(InvalidSpec):
        MovingDomain(a=Trajectory.constant(0.0), b=Trajectory.constant(0.0), horizon=1.0)
    crossing = Trajectory(value=lambda t: 1.0 - 2.0 * np.asarray(t), slope=lambda t: -2.0 + 0.0 * np.asarray(t))
    with pytest.raises(InvalidSpec):
        MovingDomain(a=Trajectory.constant(0.0), b=crossing, horizon=1.0)
    assert MovingDomain(a=Trajectory.constant(0.0), b=crossing, horizon=0.4).ends(0.25) == (0.0, 0.5)


def test_hull_covers_the_motion():
    b = Trajectory(value=lambda t: 1.0 + np.sin(10 * np.asarray(t)), slope=lambda t: 10 * np.cos(10 * np.asarray(t)))
    domain = MovingDomain(a=Trajectory.constant(-1.0), b=b, horizon=1.0)
    lo, hi = domain.hull(0.5)
    assert lo == -1.0
    assert hi == pytest.approx(2.0, abs=1e-3)


def test_panel_plan_tiling():
    plan = PanelPlan.uniform(1e-8, 0.02, 1.0, 4, 7)
    assert plan.panels[0][0] == DensityZone.EXPONENTIAL and plan.panels[-1][0] == DensityZone.NORMAL
    assert len(plan.panels) == 11
    assert plan.edges[0] == 1e-8 and plan.edges[-1] == 1.0
    with pytest.raises(PanelPlanGap):
        PanelPlan(tC=1e-8, t0=0.02, horizon=1.0, exp_edges=[1e-8, 0.02], normal_edges=[0.03, 1.0])


def test_density_representation_tiling_and_range():
    panel = DensityPanel(zone=DensityZone.NORMAL, lo=0.02, hi=0.1, coeffs=[1.0])
    with pytest.raises(PanelPlanGap):
        DensityRepresentation(tC=1e-8, t0=0.02, constant_value=0.0, panels=(panel,))
    rep = DensityRepresentation(tC=1e-8, t0=0.02, constant_value=0.0)
    with pytest.raises(OutOfRange):
        rep(1e-3)


def test_density_representation_reports_zones():
    rep = DensityRepresentation(tC=1e-8, t0=0.02, constant_value=2.0).extend(
        DensityPanel(zone=DensityZone.EXPONENTIAL, lo=1e-8, hi=0.02, coeffs=[1.0])
    )
    rep = rep.extend(DensityPanel(zone=DensityZone.NORMAL, lo=0.02, hi=0.1, coeffs=[3.0]))
    assert [rep.zone_of(t) for t in (1e-9, 1e-8, 1e-4, 0.02, 0.05)] == [
        DensityZone.CONSTANT,
        DensityZone.CONSTANT,
        DensityZone.EXPONENTIAL,
        DensityZone.EXPONENTIAL,
        DensityZone.NORMAL,
    ]
    np.testing.assert_allclose(rep([1e-9, 1e-4, 0.05]), [2.0, 1.0, 3.0])
    assert rep.truncate(1).horizon == 0.02


def test_normal_panel_derivatives():
    panel = DensityPanel(zone=DensityZone.NORMAL, lo=0.0, hi=2.0, coeffs=[0.0, 0.0, 1.0])
    # T_2(t - 1) = 2 (t - 1)^2 - 1
    assert panel(0.5) == pytest.approx(-0.5)
    assert panel.derivative(0.5) == pytest.approx(-2.0)
    assert panel.derivative(0.5, order=2) == pytest.approx(4.0)


def test_exponential_panel_derivative():
    lo, hi = 1e-6, 1e-2
    # T_1 of the log coordinate is affine in log t
    panel = DensityPanel(zone=DensityZone.EXPONENTIAL, lo=lo, hi=hi, coeffs=[0.0, 1.0])
    t = 1e-4
    rate = 2.0 / (np.log(hi) - np.log(lo))
    assert panel.derivative(t) == pytest.approx(rate / t)
    assert panel.derivative(t, order=2) == pytest.approx(-rate / t**2)


def test_adaptive_mesh_ratio_check():
    with pytest.raises(InvalidSpec):
        AdaptiveMesh(t=1.0, edges=[0.0, 1.0, 4.0], order=4, near_spacing=1.0, alpha=1.0)


def test_heat_problem_requirements():
    f = PiecewiseChebFunction(breakpoints=[0.0, 1.0], coeffs=[[1.0]])
    with pytest.raises(InvalidSpec):
        HeatProblem(variant=ProblemVariant.DIRICHLET_MOVING, f=f)
    with pytest.raises(InvalidSpec):
        HeatProblem(variant=ProblemVariant.STEFAN, f=f, u0=1.0, beta=1.0, s0=0.5, flux=lambda t: 1.0)


@pytest.mark.parametrize(
    "weights,nodes",
    [
        ([1 + 1j, 1 + 1j], [1 + 1j, 1 + 1j]),
        ([1 - 1j, 1 + 1j], [1 - 1j, 1 + 1j]),
        ([1.0, 1j], [1.0, 2.0]),
        ([1.0, 1.0], [1.0, -2.0]),
        ([1.0], [1.0]),
    ],
)
def test_soe_table_needs_conjugate_pairs(weights, nodes):
    with pytest.raises(InvalidSpec):
        SoeTable(order=2, weights=weights, nodes=nodes, achieved_error=0.0)


def test_experiment_config_defaults_and_checks():
    config = ExperimentConfig(command="stefan")
    assert config.soe_orders == [12] and config.horizon is None
    with pytest.raises(ConfigInvalid):
        ExperimentConfig(command="stefan", times=[0.0])
    with pytest.raises(ConfigInvalid):
        ExperimentConfig(command="stefan", refinements=[])
    with pytest.raises(ConfigInvalid, match="8, 12, 16"):
        ExperimentConfig(command="stefan", soe_orders=[10])
    with pytest.raises(ValidationError):
        ExperimentConfig(command="stefan", targets=0)
