"""Boundary densities of the Dirichlet problem on a moving interval.

u = J[f] + D[phi] matches u = g_a on a(t) and u = g_b on b(t) when, for x = a, b,

    phi_x(t) - 2 D_pv[phi](x(t), t) = h_x(t),    h_x = -2 g_x + 2 J[f](x(t), t).

The densities are constant on (0, tC], Chebyshev in log t on (tC, t0] and Chebyshev
in t afterwards. Panels are solved one after the other by collocation; everything
before the current panel enters the right-hand side as history.
"""

from __future__ import annotations

import time
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev

from configuration import BLUE, GREEN, RESET, VERBOSE, YELLOW
from heat_potentials.domain.BoundaryData import BoundaryData
from heat_potentials.domain.CollocationGrid import CollocationGrid
from heat_potentials.domain.DensityPair import DensityPair
from heat_potentials.domain.DensityPanel import DensityPanel
from heat_potentials.domain.DensityRepresentation import DensityRepresentation
from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.domain.MovingDomain import MovingDomain
from heat_potentials.domain.PanelPlan import PanelPlan
from heat_potentials.domain.SoeTable import SoeTable
from heat_potentials.domain.VolterraSettings import VolterraSettings
from heat_potentials.exceptions import InvalidSpec, NonPositiveTime, PanelPlanGap, SingularSystem
from heat_potentials.fgt import heat_convolve
from heat_potentials.marching import dlhp_values, history_potential
from heat_potentials.quadrature import local_rule
from heat_potentials.soe import generate_soe_table

SIDES = ("a", "b")
SIGNS = np.array([-1.0, 1.0])
MAX_CONDITION = 1e12


def assemble_rhs(domain: MovingDomain, data: BoundaryData, t: float, table: Optional[SoeTable] = None) -> np.ndarray:
    """(h_a(t), h_b(t))."""
    if not t > 0:
        raise NonPositiveTime(f"t={t} must be positive")
    if data.is_direct:
        return np.array([float(data.h_a(t)), float(data.h_b(t))])
    rhs = -2.0 * np.array([float(data.g_a(t)), float(data.g_b(t))])
    if data.f is not None:
        table = table or generate_soe_table(12)
        rhs += 2.0 * heat_convolve(table, data.f, np.array(domain.ends(t)), t)
    return rhs


def _basis(panel: DensityPanel, s) -> tuple[np.ndarray, np.ndarray]:
    """Chebyshev basis of ``panel`` and its time derivative at s, each of shape (len(s), order + 1)."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    x = panel.local_coordinate(s)
    values = chebyshev.chebvander(x, panel.order)
    derivative = chebyshev.chebder(np.eye(panel.order + 1))
    slopes = chebyshev.chebvander(x, panel.order - 1) @ derivative * panel.coordinate_rate(s)[:, None]
    return values, slopes


def _stub(zone: DensityZone, lo: float, hi: float, order: int) -> DensityPanel:
    return DensityPanel(zone=zone, lo=lo, hi=hi, coeffs=np.zeros(order + 1))


def assemble_panel_system(
    domain: MovingDomain,
    data: BoundaryData,
    density: DensityPair,
    zone: DensityZone,
    lo: float,
    hi: float,
    settings: VolterraSettings,
    table: Optional[SoeTable] = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Collocation system of one panel: matrix (2(L+1), 2(M+1)), right-hand side and collocation times.

    Unknowns are the Chebyshev coefficients of phi_a then phi_b on (lo, hi]. Rows are the
    a-equations at every collocation time followed by the b-equations.
    """
    if abs(density.horizon - lo) > 1e-13 * max(1.0, lo):
        raise PanelPlanGap(f"panel starts at {lo}, history ends at {density.horizon}")
    L, M = settings.L, settings.M
    points = CollocationGrid(zone=zone, lo=lo, hi=hi, L=L, M=M).points
    stub = _stub(zone, lo, hi, M)
    joints = tuple(float(j) for j in density.a.joints)

    def hint(s):
        return 2.0 + chebyshev.chebval(stub.local_coordinate(s), np.eye(M + 1)[M])

    matrix = np.zeros((2 * (L + 1), 2 * (M + 1)))
    rhs = np.zeros(2 * (L + 1))
    rows = np.array([0, L + 1])
    for l, t in enumerate(points):
        t = float(t)
        targets = np.array(domain.ends(t))
        lag = t - lo
        values, _ = _basis(stub, [t])
        history = history_potential(density, domain, targets, t, lag, settings.tol)
        rhs[rows + l] = assemble_rhs(domain, data, t, table) + 2.0 * history
        for r in range(2):
            matrix[rows[r] + l, r * (M + 1) : (r + 1) * (M + 1)] = values[0]
        if lag <= 0:
            continue
        for c, side in enumerate(SIDES):
            rule = local_rule(
                domain.boundary(side),
                targets,
                lag,
                t,
                settings.tol,
                t0=density.a.t0,
                tC=density.a.tC,
                joints=joints,
                hint=hint,
                order=settings.graded_order,
            )
            nodes, _ = _basis(stub, rule.s_nodes) if rule.s_nodes.size else (np.zeros((0, M + 1)), None)
            end_values, end_slopes = _basis(stub, [t])
            block = rule.apply_basis(nodes, end_values[0], end_slopes[0])
            for r in range(2):
                matrix[rows[r] + l, c * (M + 1) : (c + 1) * (M + 1)] -= 2.0 * SIGNS[c] * block[r]
    return matrix, rhs, points


def _solve(matrix: np.ndarray, rhs: np.ndarray, where: str) -> np.ndarray:
    try:
        condition = np.linalg.cond(matrix)
        if matrix.shape[0] == matrix.shape[1]:
            coeffs = np.linalg.solve(matrix, rhs)
        else:
            coeffs = np.linalg.lstsq(matrix, rhs, rcond=None)[0]
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(f"{where}: {exc}") from exc
    if not np.isfinite(condition) or condition > MAX_CONDITION or not np.all(np.isfinite(coeffs)):
        raise SingularSystem(f"{where}: condition number {condition:.3e}")
    return coeffs


def solve_panel(
    domain: MovingDomain,
    data: BoundaryData,
    density: DensityPair,
    zone: DensityZone,
    lo: float,
    hi: float,
    settings: VolterraSettings,
    table: Optional[SoeTable] = None,
) -> tuple[DensityPanel, DensityPanel]:
    matrix, rhs, _ = assemble_panel_system(domain, data, density, zone, lo, hi, settings, table)
    coeffs = _solve(matrix, rhs, f"panel ({lo:.6g}, {hi:.6g}]")
    M = settings.M
    return (
        DensityPanel(zone=zone, lo=lo, hi=hi, coeffs=coeffs[: M + 1]),
        DensityPanel(zone=zone, lo=lo, hi=hi, coeffs=coeffs[M + 1 :]),
    )


def extend_density(density: DensityPair, panels: tuple[DensityPanel, DensityPanel]) -> DensityPair:
    return DensityPair(a=density.a.extend(panels[0]), b=density.b.extend(panels[1]))


def zone_one(
    domain: MovingDomain,
    data: BoundaryData,
    tC: float,
    t0: float,
    settings: VolterraSettings,
    table: Optional[SoeTable] = None,
) -> DensityPair:
    """Constant densities on (0, tC] from the pair of equations at t = tC."""
    targets = np.array(domain.ends(tC))
    matrix = np.eye(2)
    for c, side in enumerate(SIDES):
        gamma = domain.boundary(side)
        rule = local_rule(gamma, targets, tC, tC, settings.tol, t0=t0, tC=tC, order=settings.graded_order)
        unit = rule.apply(lambda s: np.ones(np.shape(s)), lambda s: np.zeros(np.shape(s)))
        matrix[:, c] -= 2.0 * SIGNS[c] * unit
    constants = _solve(matrix, assemble_rhs(domain, data, tC, table), f"constant zone (0, {tC:.3g}]")
    return DensityPair(
        a=DensityRepresentation(tC=tC, t0=t0, constant_value=float(constants[0])),
        b=DensityRepresentation(tC=tC, t0=t0, constant_value=float(constants[1])),
    )


def solve_density(
    domain: MovingDomain,
    data: BoundaryData,
    plan: PanelPlan,
    settings: Optional[VolterraSettings] = None,
    table: Optional[SoeTable] = None,
    initial: Optional[DensityPair] = None,
) -> DensityPair:
    """Densities on (0, plan.horizon], continuing ``initial`` when given."""
    settings = settings or VolterraSettings()
    verbose = settings.verbose or VERBOSE
    if plan.horizon > domain.horizon * (1 + 1e-12):
        raise InvalidSpec(f"panels reach {plan.horizon}, the domain ends at {domain.horizon}")
    table = table or generate_soe_table(settings.soe_order)
    start_time = time.time()

    density = initial if initial is not None else zone_one(domain, data, plan.tC, plan.t0, settings, table)
    panels = [panel for panel in plan.panels if panel[2] > density.horizon * (1 + 1e-13)]
    for k, (zone, lo, hi) in enumerate(panels):
        density = extend_density(density, solve_panel(domain, data, density, zone, lo, hi, settings, table))
        if verbose:
            print(
                f"{BLUE}[volterra]{RESET} panel {k + 1}/{len(panels)} {YELLOW}{zone}{RESET} "
                f"({lo:.3e}, {hi:.3e}] phi_a={float(density.a(hi)):+.6e} phi_b={float(density.b(hi)):+.6e}",
                flush=True,
            )
    if verbose and panels:
        print(f"{GREEN}[volterra] Time taken: {time.time() - start_time:.2f} seconds{RESET}", flush=True)
    return density


def eval_density(rep: DensityRepresentation, t):
    return rep(t)


def density_residual(
    domain: MovingDomain,
    data: BoundaryData,
    density: DensityPair,
    times,
    tol: float = 1e-10,
    table: Optional[SoeTable] = None,
) -> np.ndarray:
    """phi_x(t) - 2 D_pv(x(t), t) - h_x(t) for x = a, b; shape (len(times), 2)."""
    table = table or generate_soe_table(12)
    out = []
    for t in np.atleast_1d(np.asarray(times, dtype=float)):
        t = float(t)
        targets = np.array(domain.ends(t))
        phi = np.array([float(density.a(t)), float(density.b(t))])
        out.append(phi - 2.0 * dlhp_values(density, domain, targets, t, tol) - assemble_rhs(domain, data, t, table))
    return np.array(out)
