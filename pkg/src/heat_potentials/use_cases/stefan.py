"""One-phase Stefan problem on (0, s(t)) with s' = -beta u_x(s(t), t).

The front is a piecewise Chebyshev curve over uniform time panels. Inside a panel an
Euler predictor guesses s at second-kind nodes; every correction sweep re-solves the
boundary densities on the guessed domain, evaluates the front velocity from the
potential representation and integrates it with the spectral integration matrix.

The plain fixed-point sweep contracts only like sqrt(h): moving the front by ds changes
the wall flux through the half-derivative Dirichlet-to-Neumann map. Each sweep is
therefore a Newton step with the linearised front response

    dv = -(v^2 / 2) ds - d^{1/2}(v ds),

the local part from u_xx = u_t = -u_x s' at the front and the drift of the moving front,
the half-derivative from the boundary layer of width sqrt(h). The fixed point is unchanged.
"""

from __future__ import annotations

import math
import time
from typing import Optional

import numpy as np
from numpy.polynomial import chebyshev
from scipy import special

from configuration import GREEN, RED, RESET, T0, TC, VERBOSE, YELLOW
from heat_potentials.domain.BoundaryData import BoundaryData
from heat_potentials.domain.DensityPair import DensityPair
from heat_potentials.domain.HeatProblem import HeatProblem
from heat_potentials.domain.MovingDomain import MovingDomain
from heat_potentials.domain.PanelPlan import PanelPlan
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.ProblemVariant import ProblemVariant
from heat_potentials.domain.SoeTable import SoeTable
from heat_potentials.domain.SolutionRecord import SolutionRecord
from heat_potentials.domain.StefanFlux import StefanFlux
from heat_potentials.domain.Trajectory import Trajectory
from heat_potentials.domain.VolterraSettings import VolterraSettings
from heat_potentials.exceptions import InvalidSpec, SdcDivergence
from heat_potentials.marching import boundary_flux
from heat_potentials.soe import generate_soe_table
from heat_potentials.use_cases.exact_solutions import stefan_lambda, stefan_reference, stefan_wall_temperature
from heat_potentials.use_cases.profiles import l2_error, potential_profile
from heat_potentials.volterra import solve_density

STALL_RESIDUAL = 1e-13
INITIAL_PIECES = 4
INITIAL_ORDER = 24
# largest hi/lo of a density panel; the densities carry sqrt(t) terms from the start-up
GRADING_RATIO = 1.5


def stefan_problem(
    flux_kind: StefanFlux = StefanFlux.CLASSICAL,
    lam: float = 0.5,
    beta: float = 1.0,
    t0: float = 0.1,
    horizon: float = 1.0,
) -> HeatProblem:
    """Similarity profile at time t0 as initial data; the wall is held at u_0 or u_0 (1 + cos 5 pi t) / 2."""
    u0 = stefan_wall_temperature(lam, beta)
    s0 = 2.0 * lam * np.sqrt(t0)
    f = PiecewiseChebFunction.from_function(
        lambda x: stefan_reference(lam, beta, t0, x, 0.0)[0], np.linspace(0.0, s0, INITIAL_PIECES + 1), INITIAL_ORDER
    )
    if flux_kind == StefanFlux.CLASSICAL:
        flux, exact = (lambda t: u0), (lambda x, t: stefan_reference(lam, beta, t0, x, t)[0])
    else:
        flux, exact = (lambda t: 0.5 * u0 * (1.0 + np.cos(5.0 * np.pi * t))), None
    return HeatProblem(
        variant=ProblemVariant.STEFAN,
        f=f,
        horizon=horizon,
        u0=u0,
        beta=beta,
        s0=s0,
        flux=flux,
        flux_kind=flux_kind,
        exact=exact,
    )


def front_reference(problem: HeatProblem, t) -> np.ndarray:
    """s(t) of the similarity solution the classical problem was started from."""
    lam = stefan_lambda(problem.u0, problem.beta)
    t0 = (problem.s0 / (2.0 * lam)) ** 2
    return stefan_reference(lam, problem.beta, t0, 0.0, t)[1]


def integration_matrix(nodes: np.ndarray, width: float) -> np.ndarray:
    """S with (S F)_j = int_lo^{tau_j} of the interpolant of F at ``nodes`` in [-1, 1]."""
    order = nodes.size - 1
    to_coeffs = np.linalg.inv(chebyshev.chebvander(nodes, order))
    return chebyshev.chebvander(nodes, order + 1) @ chebyshev.chebint(to_coeffs, lbnd=-1) * (0.5 * width)


def half_integration_matrix(nodes: np.ndarray, width: float) -> np.ndarray:
    """A with (A F)_j = pi^{-1/2} int_lo^{tau_j} F(s) (tau_j - s)^{-1/2} ds for the interpolant of F at ``nodes``.

    Gauss-Jacobi with weight (1 - x)^{-1/2} on each [lo, tau_j] is exact for the interpolant.
    """
    order = nodes.size - 1
    to_coeffs = np.linalg.inv(chebyshev.chebvander(nodes, order))
    x, w = special.roots_jacobi(order + 1, -0.5, 0.0)
    matrix = np.zeros((nodes.size, nodes.size))
    for j, node in enumerate(nodes):
        covered = 0.5 * (node + 1.0)
        if covered <= 0:
            continue
        local = -1.0 + covered * (1.0 + x)
        matrix[j] = np.sqrt(0.5 * covered * width / np.pi) * (w @ chebyshev.chebvander(local, order)) @ to_coeffs
    return matrix


def _correct(
    values: np.ndarray, speed: np.ndarray, front_lo: float, integrate: np.ndarray, half_integrate: np.ndarray
) -> np.ndarray:
    """Newton step on s = s_lo + S v(s) with the linearised front response."""
    residual = front_lo + integrate @ speed - values
    jacobian = np.eye(values.size) + integrate * (0.5 * speed**2) + half_integrate * speed
    return values + np.linalg.solve(jacobian, residual)


def _density_edges(edges: np.ndarray, upto: int, subdivisions: int) -> np.ndarray:
    """Normal-zone density edges up to edges[upto], graded so that no panel has hi/lo above GRADING_RATIO."""
    t0 = min(T0, 0.5 * edges[1])
    normal = [np.array([t0])]
    for i in range(upto):
        lo, hi = (t0 if i == 0 else edges[i]), edges[i + 1]
        pieces = max(subdivisions, math.ceil(np.log(hi / lo) / np.log(GRADING_RATIO) - 1e-9))
        normal.append(np.geomspace(lo, hi, pieces + 1)[1:])
    return np.concatenate(normal)


def _density_plan(edges: np.ndarray, upto: int, n_exp: int, subdivisions: int) -> PanelPlan:
    """Density panels covering (tC, edges[upto]]: log-uniform up to t0, graded per front panel after."""
    t0 = min(T0, 0.5 * edges[1])
    return PanelPlan.with_normal_edges(TC, t0, n_exp, _density_edges(edges, upto, subdivisions))


class _FrontState:
    """Front pieces accepted so far and the density solved on them."""

    def __init__(self, problem: HeatProblem, edges: np.ndarray, settings: VolterraSettings, table: SoeTable):
        self.problem = problem
        self.edges = edges
        self.settings = settings
        self.table = table
        self.coeffs: list[np.ndarray] = []
        self.density: Optional[DensityPair] = None
        self.domain: Optional[MovingDomain] = None
        self.data = BoundaryData(g_a=problem.flux, g_b=lambda t: 0.0, f=problem.f)

    def solve(self, panel: int, coeffs: np.ndarray, n_exp: int, subdivisions: int) -> tuple[MovingDomain, DensityPair]:
        """Densities on (0, edges[panel + 1]] with the candidate front ``coeffs`` on the last panel."""
        curve = PiecewiseChebFunction(breakpoints=self.edges[: panel + 2], coeffs=self.coeffs + [coeffs])
        front = Trajectory.from_cheb(curve, "s")
        domain = MovingDomain(a=Trajectory.constant(0.0), b=front, horizon=self.edges[panel + 1])
        prefix = None
        if panel > 0:
            kept = n_exp + _density_edges(self.edges, panel, subdivisions).size - 1
            prefix = DensityPair(a=self.density.a.truncate(kept), b=self.density.b.truncate(kept))
        plan = _density_plan(self.edges, panel + 1, n_exp, subdivisions)
        density = solve_density(domain, self.data, plan, self.settings, self.table, initial=prefix)
        return domain, density


def solve_stefan(
    problem: HeatProblem,
    n_panels: int,
    order: int = 8,
    rounds: int = 4,
    settings: Optional[VolterraSettings] = None,
    n_exp: int = 8,
    subdivisions: int = 1,
    table: Optional[SoeTable] = None,
    verbose: bool = False,
) -> SolutionRecord:
    """Front s(t) on [0, horizon] with ``n_panels`` panels of Chebyshev order ``order`` and ``rounds`` sweeps each."""
    if problem.variant != ProblemVariant.STEFAN:
        raise InvalidSpec(f"expected a stefan problem, got {problem.variant}")
    if n_panels < 1 or order < 1 or rounds < 0:
        raise InvalidSpec(f"need n_panels >= 1, order >= 1, rounds >= 0; got {n_panels}, {order}, {rounds}")
    settings = settings or VolterraSettings(L=9, M=8)
    verbose = verbose or settings.verbose or VERBOSE
    table = table or generate_soe_table(settings.soe_order)
    tol = settings.tol
    start_time = time.time()

    edges = np.linspace(0.0, problem.horizon, n_panels + 1)
    width = edges[1] - edges[0]
    nodes = np.sort(chebyshev.chebpts2(order + 1))
    integrate = integration_matrix(nodes, width)
    half_integrate = half_integration_matrix(nodes, width)
    sweep_residuals: list[list[float]] = []
    state = _FrontState(problem, edges, settings, table)
    front_lo = problem.s0
    initial_velocity = -problem.beta * float(problem.f.derivative()(problem.s0))
    velocity = initial_velocity

    for panel in range(n_panels):
        taus = edges[panel] + 0.5 * (nodes + 1.0) * width
        values = front_lo + velocity * (taus - edges[panel])
        previous_residual, growth = np.inf, 0
        sweep_residuals.append([])
        for sweep in range(rounds):
            domain, density = state.solve(panel, chebyshev.chebfit(nodes, values, order), n_exp, subdivisions)
            speed = np.zeros(taus.size)
            if problem.beta != 0:
                for j, tau in enumerate(taus):
                    if tau > 0:
                        speed[j] = -problem.beta * boundary_flux(density, domain, problem.f, float(tau), tol, table)
                    else:
                        speed[j] = initial_velocity
            updated = _correct(values, speed, front_lo, integrate, half_integrate)
            residual = float(np.max(np.abs(updated - values)))
            sweep_residuals[-1].append(residual)
            values = updated
            growth = growth + 1 if residual > previous_residual and residual > STALL_RESIDUAL else 0
            if verbose:
                print(
                    f"{YELLOW}[stefan]{RESET} panel {panel + 1}/{n_panels} sweep {sweep + 1}/{rounds} "
                    f"s={values[-1]:.12f} residual={residual:.3e}",
                    flush=True,
                )
            if growth >= 2:
                if verbose:
                    print(f"{RED}[stefan] correction diverges on panel {panel + 1}{RESET}", flush=True)
                raise SdcDivergence(f"residual grew twice in a row on panel {panel + 1}: {residual:.3e}")
            previous_residual = residual
            velocity = speed[-1]
        coeffs = chebyshev.chebfit(nodes, values, order)
        state.domain, state.density = state.solve(panel, coeffs, n_exp, subdivisions)
        state.coeffs.append(coeffs)
        front_lo = float(values[-1])

    front = PiecewiseChebFunction(breakpoints=edges, coeffs=state.coeffs)
    end = problem.horizon
    profile = potential_profile(state.domain, problem.f, state.density, end, table, tol=tol)
    errors = {"s_end": float(front(end))}
    if problem.flux_kind == StefanFlux.CLASSICAL and problem.beta > 0:
        errors["front"] = float(abs(front(end) - front_reference(problem, end)))
        errors["l2"] = l2_error(profile, lambda x: problem.exact(x, end))
    if verbose:
        print(f"{GREEN}[stefan] s({end:g}) = {errors['s_end']:.12f}{RESET}", flush=True)
        print(f"{GREEN}[stefan] Time taken: {time.time() - start_time:.2f} seconds{RESET}", flush=True)
    return SolutionRecord(times=[end], profiles=[profile], front=front, errors=errors, sweep_residuals=sweep_residuals)
