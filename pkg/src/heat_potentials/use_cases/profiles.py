from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from configuration import TOL
from heat_potentials.domain.DensityPair import DensityPair
from heat_potentials.domain.MovingDomain import MovingDomain
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.PotentialSnapshot import PotentialSnapshot
from heat_potentials.domain.SoeTable import SoeTable
from heat_potentials.fgt import heat_convolve
from heat_potentials.marching import dlhp_values
from heat_potentials.quadrature import gauss_legendre


def l2_error(profile: PiecewiseChebFunction, exact: Callable, extra_order: int = 8) -> float:
    """||profile - exact||_2 over the profile's domain, Gauss-Legendre per piece."""
    x, w = gauss_legendre(max(profile.orders) + extra_order)
    total = 0.0
    for lo, hi in zip(profile.breakpoints[:-1], profile.breakpoints[1:]):
        y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x
        total += 0.5 * (hi - lo) * float(np.dot(w, (profile(y) - exact(y)) ** 2))
    return float(np.sqrt(total))


def potential_profile(
    domain: MovingDomain,
    f: Optional[PiecewiseChebFunction],
    density: DensityPair,
    t: float,
    table: SoeTable,
    pieces: int = 8,
    order: int = 16,
    tol: float = TOL,
    snapshot: Optional[PotentialSnapshot] = None,
) -> PiecewiseChebFunction:
    """u(., t) = J[f] + D[phi] on (a(t), b(t)) as a piecewise Chebyshev interpolant.

    The double layer comes from ``snapshot`` when one is given for this time, else it is
    integrated directly. Interpolation nodes are interior, so no node sits on the boundary.
    """
    a_t, b_t = domain.ends(t)
    breakpoints = np.linspace(a_t, b_t, pieces + 1)
    nodes = PiecewiseChebFunction.interpolation_nodes(breakpoints, order)
    flat = nodes.ravel()
    values = snapshot.values(flat) if snapshot is not None else dlhp_values(density, domain, flat, t, tol)
    if f is not None:
        values = values + heat_convolve(table, f, flat, t)
    return PiecewiseChebFunction.from_node_values(breakpoints, values.reshape(nodes.shape))
