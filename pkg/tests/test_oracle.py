import numpy as np
import pytest
from scipy import special

from heat_potentials.domain.LayerKind import LayerKind
from heat_potentials.domain.LocalIntegralSpec import LocalIntegralSpec
from heat_potentials.domain.OracleConfig import OracleConfig
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.Trajectory import Trajectory
from heat_potentials.exceptions import DepthExceeded, NonPositiveTime
from heat_potentials.oracle import adaptive_integral, oracle_gauss_conv, oracle_history_integral


def test_gauss_conv_of_constant():
    f = PiecewiseChebFunction(breakpoints=[-1.0, 1.0], coeffs=[[1.0]])
    assert oracle_gauss_conv(f, 0.0, 0.01) == pytest.approx(special.erf(5.0), abs=1e-13)
    assert oracle_gauss_conv(f, 1.0, 0.01) == pytest.approx(0.5 * special.erf(10.0), abs=1e-13)


def test_gauss_conv_is_deterministic():
    f = PiecewiseChebFunction.from_function(np.cos, np.linspace(0, 2, 4), 10)
    assert oracle_gauss_conv(f, 0.7, 1e-3) == oracle_gauss_conv(f, 0.7, 1e-3)


def test_gauss_conv_rejects_nonpositive_time():
    f = PiecewiseChebFunction(breakpoints=[-1.0, 1.0], coeffs=[[1.0]])
    with pytest.raises(NonPositiveTime):
        oracle_gauss_conv(f, 0.0, -1.0)


def test_history_integral_static_boundary():
    spec = LocalIntegralSpec(
        y=0.3, gamma=Trajectory.constant(0.0), phi=lambda s: np.ones(np.shape(s)), a=0.5, b=0.5, eps=1e-4
    )
    assert oracle_history_integral(spec) == pytest.approx(0.5 * special.erfc(0.3 / (2 * np.sqrt(0.5))), abs=1e-12)


def test_history_integral_of_single_layer():
    spec = LocalIntegralSpec(
        y=0.0,
        gamma=Trajectory.constant(0.0),
        phi=lambda s: np.ones(np.shape(s)),
        a=0.25,
        b=0.25,
        eps=1e-4,
        layer=LayerKind.SINGLE,
    )
    # int_0^a (4 pi tau)^{-1/2} dtau = sqrt(a / pi)
    assert oracle_history_integral(spec) == pytest.approx(np.sqrt(0.25 / np.pi), abs=1e-11)


def test_adaptive_integral_depth_limit():
    with pytest.raises(DepthExceeded):
        adaptive_integral(lambda x: np.sign(x - 0.3), 0.0, 1.0, OracleConfig(tol=1e-14, max_depth=2))
