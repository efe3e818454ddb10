import numpy as np
import pytest
from scipy import special, stats

from heat_potentials.domain.LayerKind import LayerKind
from heat_potentials.domain.LocalIntegralSpec import LocalIntegralSpec
from heat_potentials.domain.Trajectory import Trajectory
from heat_potentials.exceptions import AccuracyNotMet, InvalidSpec, RegionMismatch
from heat_potentials.oracle import oracle_history_integral
from heat_potentials.quadrature import (
    DEGENERATE_OFFSET,
    SMALL_DRIFT,
    asymptotic_local,
    default_eps,
    graded_dual_mesh,
    graded_single_mesh,
    graded_window,
    head_coefficients,
    history_rule,
    local_history_integral,
    local_rule,
)


def _ones(s):
    return np.ones(np.shape(s))


def _parabola():
    return Trajectory(
        value=lambda t: 0.3 * np.asarray(t, dtype=float) ** 2,
        slope=lambda t: 0.6 * np.asarray(t, dtype=float),
        curvature=lambda t: np.full(np.shape(t), 0.6) if np.ndim(t) else 0.6,
    )


def _static_spec(a, b, y=0.3, eps=1e-4):
    return LocalIntegralSpec(y=y, gamma=Trajectory.constant(0.0), phi=_ones, a=a, b=b, eps=eps)


def test_static_boundary_closed_form():
    spec = _static_spec(0.5, 0.5)
    expected = 0.5 * special.erfc(0.3 / (2 * np.sqrt(0.5)))
    assert local_history_integral(spec, 1e-12) == pytest.approx(expected, abs=1e-10)


def test_single_mesh_window():
    spec = _static_spec(0.1, 0.5)
    expected = 0.5 * special.erfc(0.3 / (2 * np.sqrt(0.1)))
    assert local_history_integral(spec, 1e-12) == pytest.approx(expected, abs=1e-10)


def test_mesh_choice_is_checked():
    with pytest.raises(RegionMismatch):
        graded_dual_mesh(_static_spec(0.1, 0.5), 1e-10)
    with pytest.raises(RegionMismatch):
        graded_single_mesh(_static_spec(0.5, 0.5), 1e-10)


def test_spec_limits_are_validated():
    with pytest.raises(InvalidSpec):
        _static_spec(0.5, 0.4)
    with pytest.raises(InvalidSpec):
        _static_spec(0.5, 0.5, eps=0.6)


def test_head_vanishes_off_the_boundary():
    spec = _static_spec(0.5, 0.5, y=0.3, eps=1e-5)
    assert asymptotic_local(spec) == 0.0


def test_head_error_is_order_three_halves():
    gamma = _parabola()
    b = 0.5
    eps_values = [1e-3, 1e-4, 1e-5]
    errors = []
    for eps in eps_values:
        # the oracle integrates over (0, a), so a = eps gives the exact head
        spec = LocalIntegralSpec(
            y=float(gamma(b)), gamma=gamma, phi=lambda s: 1.0 + s, phi_slope=_ones, a=eps, b=b, eps=eps / 2
        )
        head = asymptotic_local(spec.model_copy(update={"eps": eps}))
        errors.append(abs(head - oracle_history_integral(spec)))
    slope = stats.linregress(np.log(eps_values), np.log(errors)).slope
    assert 1.3 <= slope <= 1.7


def test_on_boundary_integral_matches_oracle():
    gamma = _parabola()
    b = 0.5
    spec = LocalIntegralSpec(
        y=float(gamma(b)), gamma=gamma, phi=lambda s: 1.0 + s, phi_slope=_ones, a=b, b=b, eps=1e-6
    )
    assert local_history_integral(spec, 1e-12) == pytest.approx(oracle_history_integral(spec), abs=1e-8)


def test_local_rule_matches_single_target_integral():
    gamma = _parabola()
    b, eps = 0.4, 1e-5
    targets = np.array([float(gamma(b)) - 0.2, float(gamma(b)), float(gamma(b)) + 0.05])
    rule = local_rule(gamma, targets, b, b, 1e-12, eps=eps)
    values = rule.apply(lambda s: np.cos(s), lambda s: -np.sin(s))
    for y, value in zip(targets, values):
        spec = LocalIntegralSpec(y=y, gamma=gamma, phi=np.cos, phi_slope=lambda s: -np.sin(s), a=b, b=b, eps=eps)
        assert value == pytest.approx(local_history_integral(spec, 1e-12), abs=1e-10)


def test_history_rule_covers_the_older_part():
    rule = history_rule(Trajectory.constant(0.0), [0.3], 0.1, 0.5, 1e-12)
    expected = 0.5 * special.erfc(0.3 / (2 * np.sqrt(0.5))) - 0.5 * special.erfc(0.3 / (2 * np.sqrt(0.1)))
    assert rule.apply(_ones)[0] == pytest.approx(expected, abs=1e-11)


def test_single_layer_head():
    # int_0^eps (4 pi tau)^{-1/2} dtau = sqrt(eps / pi) on the boundary
    c0, c1 = head_coefficients(0.0, 0.0, 1e-4, LayerKind.SINGLE)
    assert float(c0) == pytest.approx(np.sqrt(1e-4 / np.pi), rel=1e-12)


def test_default_eps():
    assert default_eps(0.5, 1e-4) == pytest.approx(1e-4)
    assert default_eps(1e-4, 1e-4) == pytest.approx(1e-5)
    assert default_eps(0.5, 1e-10) == pytest.approx(1e-11 ** (2 / 3))


def test_graded_window_integrates_smooth_integrands():
    mesh = graded_window(lambda tau: np.atleast_2d(tau**2), 0.1, 0.5, b=1.0, c=0.2, tol=1e-13)
    assert np.sum(mesh.weights * mesh.nodes**2) == pytest.approx((0.5**3 - 0.1**3) / 3, rel=1e-13)
    assert mesh.panel_edges[0] == pytest.approx(0.1)
    assert mesh.panel_edges[-1] == pytest.approx(0.5)


def test_graded_window_refuses_an_unresolved_panel():
    with pytest.raises(AccuracyNotMet, match="after 3 bisections"):
        graded_window(lambda tau: np.atleast_2d(np.sin(1e5 * tau)), 0.1, 0.5, b=1.0, c=0.2, tol=1e-10, max_depth=3)


@pytest.mark.parametrize("layer", list(LayerKind))
@pytest.mark.parametrize("p", [0.0, 3e-3, -1e-2])
def test_head_is_continuous_across_the_drift_threshold(layer, p):
    eps = 1e-4
    # the small-drift expansion takes over at |slope| sqrt(eps) / 2 = SMALL_DRIFT
    edge = 2.0 * SMALL_DRIFT / np.sqrt(eps)
    below = head_coefficients(p, edge * (1 - 1e-9), eps, layer)
    above = head_coefficients(p, edge * (1 + 1e-9), eps, layer)
    np.testing.assert_allclose(below, above, rtol=1e-7, atol=1e-12)


def test_head_offsets_below_the_threshold_are_on_the_boundary():
    on = head_coefficients(0.0, 0.3, 1e-4)
    collapsed = head_coefficients(0.5 * DEGENERATE_OFFSET, 0.3, 1e-4)
    assert [float(c) for c in collapsed] == [float(c) for c in on]


@pytest.mark.parametrize("slope", [0.3, 1e-4])
def test_double_layer_head_jumps_by_one_half_across_the_boundary(slope):
    on = [float(c) for c in head_coefficients(0.0, slope, 1e-4)]
    above = [float(c) for c in head_coefficients(2 * DEGENERATE_OFFSET, slope, 1e-4)]
    below = [float(c) for c in head_coefficients(-2 * DEGENERATE_OFFSET, slope, 1e-4)]
    assert above[0] - on[0] == pytest.approx(0.5, abs=1e-9)
    assert on[0] - below[0] == pytest.approx(0.5, abs=1e-9)
    assert above[1] == pytest.approx(on[1], abs=1e-9)
    assert below[1] == pytest.approx(on[1], abs=1e-9)


def test_single_layer_head_is_continuous_across_the_boundary():
    on = [float(c) for c in head_coefficients(0.0, 0.3, 1e-4, LayerKind.SINGLE)]
    for offset in (2 * DEGENERATE_OFFSET, -2 * DEGENERATE_OFFSET):
        near = [float(c) for c in head_coefficients(offset, 0.3, 1e-4, LayerKind.SINGLE)]
        np.testing.assert_allclose(near, on, rtol=1e-9)
