"""Dirichlet problems on moving intervals: densities first, then u = J[f] + D[phi]."""

from __future__ import annotations

import time
from typing import Optional

import numpy as np
from scipy import special

from configuration import GREEN, MAGENTA, RESET, T0, TC, VERBOSE
from heat_potentials.domain.BoundaryData import BoundaryData
from heat_potentials.domain.DensityPair import DensityPair
from heat_potentials.domain.HeatProblem import HeatProblem
from heat_potentials.domain.MarchSettings import MarchSettings
from heat_potentials.domain.MovingDomain import MovingDomain
from heat_potentials.domain.PanelPlan import PanelPlan
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.ProblemVariant import ProblemVariant
from heat_potentials.domain.SoeTable import SoeTable
from heat_potentials.domain.SolutionRecord import SolutionRecord
from heat_potentials.domain.Trajectory import Trajectory
from heat_potentials.domain.VolterraSettings import VolterraSettings
from heat_potentials.exceptions import InvalidSpec
from heat_potentials.marching import march
from heat_potentials.soe import generate_soe_table
from heat_potentials.use_cases.exact_solutions import windowed_sine_solution
from heat_potentials.use_cases.profiles import l2_error, potential_profile
from heat_potentials.volterra import solve_density


def moving_sine_domain(k: int, horizon: float = 0.2) -> MovingDomain:
    """a(t) = sin(k pi t) / 2, b(t) = 1 - log(1 + t) + J_1(k pi t)."""
    w = k * np.pi

    def phase(t):
        return w * np.asarray(t, dtype=float)

    a = Trajectory(
        value=lambda t: 0.5 * np.sin(phase(t)),
        slope=lambda t: 0.5 * w * np.cos(phase(t)),
        curvature=lambda t: -0.5 * w**2 * np.sin(phase(t)),
        label=f"sin({k}pi t)/2",
    )
    b = Trajectory(
        value=lambda t: 1.0 - np.log1p(t) + special.j1(phase(t)),
        slope=lambda t: -1.0 / (1.0 + np.asarray(t, dtype=float)) + w * special.jvp(1, phase(t)),
        curvature=lambda t: (1.0 + np.asarray(t, dtype=float)) ** -2 + w**2 * special.jvp(1, phase(t), 2),
        label=f"1-log(1+t)+J1({k}pi t)",
    )
    return MovingDomain(a=a, b=b, horizon=horizon)


def dirichlet_problem(k: int, horizon: float = 0.2, pieces: int = 8, order: int = 16) -> HeatProblem:
    """Boundary data taken from int_{-2}^{2} K(x - y, t) sin(k pi y) dy, f = sin(k pi x) on (0, 1)."""
    domain = moving_sine_domain(k, horizon)
    exact = windowed_sine_solution(k)
    a0, b0 = domain.ends(0.0)
    f = PiecewiseChebFunction.from_function(lambda x: np.sin(k * np.pi * x), np.linspace(a0, b0, pieces + 1), order)
    return HeatProblem(
        variant=ProblemVariant.DIRICHLET_MOVING,
        f=f,
        horizon=horizon,
        domain=domain,
        g_a=lambda t: float(exact(domain.a(t), t)),
        g_b=lambda t: float(exact(domain.b(t), t)),
        exact=exact,
    )


def volterra_benchmark(horizon: float = 1.0) -> tuple[MovingDomain, BoundaryData]:
    """a(t) = -1 + J_2(10t), b(t) = sin(20t)/3 with h_a = sin(10 pi t), h_b = 1 - J_1(10t)."""
    a = Trajectory(
        value=lambda t: -1.0 + special.jv(2, 10.0 * np.asarray(t, dtype=float)),
        slope=lambda t: 10.0 * special.jvp(2, 10.0 * np.asarray(t, dtype=float)),
        curvature=lambda t: 100.0 * special.jvp(2, 10.0 * np.asarray(t, dtype=float), 2),
        label="-1+J2(10t)",
    )
    b = Trajectory(
        value=lambda t: np.sin(20.0 * np.asarray(t, dtype=float)) / 3.0,
        slope=lambda t: 20.0 * np.cos(20.0 * np.asarray(t, dtype=float)) / 3.0,
        curvature=lambda t: -400.0 * np.sin(20.0 * np.asarray(t, dtype=float)) / 3.0,
        label="sin(20t)/3",
    )
    data = BoundaryData(h_a=lambda t: np.sin(10.0 * np.pi * t), h_b=lambda t: 1.0 - special.j1(10.0 * t))
    return MovingDomain(a=a, b=b, horizon=horizon), data


def density_plan(horizon: float, n_exp: int, n_normal: int, t0: float = T0, tC: float = TC) -> PanelPlan:
    """Log-uniform panels on (tC, min(t0, horizon)], uniform ones after."""
    return PanelPlan.uniform(tC, t0, horizon, n_exp, n_normal)


def boundary_data(problem: HeatProblem) -> BoundaryData:
    return BoundaryData(g_a=problem.g_a, g_b=problem.g_b, f=problem.f)


def solve_dirichlet_moving(
    problem: HeatProblem,
    plan: PanelPlan,
    times,
    settings: Optional[VolterraSettings] = None,
    march_settings: Optional[MarchSettings] = None,
    table: Optional[SoeTable] = None,
    pieces: int = 8,
    order: int = 16,
    verbose: bool = False,
) -> tuple[SolutionRecord, DensityPair]:
    """Profiles u(., t) on Omega(t) at ``times``; with ``march_settings`` the double layer is marched.

    Errors against ``problem.exact`` are reported as ``l2@<t>`` per time and ``l2`` at the last one.
    """
    if problem.variant != ProblemVariant.DIRICHLET_MOVING:
        raise InvalidSpec(f"expected a dirichlet-moving problem, got {problem.variant}")
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times <= 0) or np.any(times > plan.horizon * (1 + 1e-12)):
        raise InvalidSpec(f"profile times must lie in (0, {plan.horizon}]")
    settings = settings or VolterraSettings()
    verbose = verbose or settings.verbose or VERBOSE
    table = table or generate_soe_table(settings.soe_order)
    start_time = time.time()

    domain = problem.domain
    density = solve_density(domain, boundary_data(problem), plan, settings, table)
    snapshots = [None] * times.size
    if march_settings is not None:
        snapshots = march(density, domain, times, march_settings, table)

    profiles, errors = [], {}
    for t, snapshot in zip(times, snapshots):
        t = float(t)
        profile = potential_profile(domain, problem.f, density, t, table, pieces, order, settings.tol, snapshot)
        profiles.append(profile)
        if problem.exact is not None:
            errors[f"l2@{t:g}"] = l2_error(profile, lambda x: problem.exact(x, t))
            errors["l2"] = errors[f"l2@{t:g}"]
        if verbose:
            print(f"{MAGENTA}[dirichlet]{RESET} profile t={t:.4g} {errors.get('l2', float('nan')):.3e}", flush=True)
    if verbose:
        print(f"{GREEN}[dirichlet] Time taken: {time.time() - start_time:.2f} seconds{RESET}", flush=True)
    marched = [snapshot for snapshot in snapshots if snapshot is not None]
    return SolutionRecord(times=times, profiles=profiles, errors=errors, snapshots=marched), density
