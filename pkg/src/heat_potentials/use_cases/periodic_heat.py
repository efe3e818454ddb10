"""Forced heat equation on the period cell [-1, 1].

Each step convolves the current profile with the periodized kernel and adds the forcing
of the step, integrated in time by Gauss-Legendre with one periodic transform per node.
"""

from __future__ import annotations

import time
from typing import Optional

import numpy as np

from configuration import CYAN, GREEN, RESET, VERBOSE
from heat_potentials.domain.HeatProblem import HeatProblem
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.ProblemVariant import ProblemVariant
from heat_potentials.domain.SoeTable import SoeTable
from heat_potentials.domain.SolutionRecord import SolutionRecord
from heat_potentials.exceptions import InvalidSpec
from heat_potentials.fgt import fgt_periodic
from heat_potentials.quadrature import gauss_legendre
from heat_potentials.soe import generate_soe_table
from heat_potentials.use_cases.exact_solutions import periodic_solution
from heat_potentials.use_cases.profiles import l2_error

CELL = (-1.0, 1.0)


def periodic_problem(k: int, pieces: int = 32, order: int = 16, horizon: float = 1.0) -> HeatProblem:
    """Forcing that keeps u = cos(k pi t) sin((k + 1) pi x)."""
    exact, forcing = periodic_solution(k)
    breakpoints = np.linspace(*CELL, pieces + 1)
    f = PiecewiseChebFunction.from_function(lambda x: exact(x, 0.0), breakpoints, order)
    return HeatProblem(variant=ProblemVariant.PERIODIC_FORCED, f=f, forcing=forcing, horizon=horizon, exact=exact)


def solve_periodic(
    problem: HeatProblem,
    steps: int,
    order: int = 8,
    table: Optional[SoeTable] = None,
    keep_profiles: bool = False,
    verbose: bool = False,
) -> SolutionRecord:
    """March ``steps`` uniform steps to the horizon with ``order`` Gauss-Legendre nodes per step."""
    if problem.variant != ProblemVariant.PERIODIC_FORCED:
        raise InvalidSpec(f"expected a periodic-forced problem, got {problem.variant}")
    if steps < 1 or order < 1:
        raise InvalidSpec(f"need steps >= 1 and order >= 1, got {steps}, {order}")
    table = table or generate_soe_table(12)
    verbose = verbose or VERBOSE
    start_time = time.time()

    u = problem.f
    breakpoints = u.breakpoints
    degree = max(u.orders)
    nodes = PiecewiseChebFunction.interpolation_nodes(breakpoints, degree)
    flat = nodes.ravel()
    dt = problem.horizon / steps
    s, w = gauss_legendre(order)

    times, profiles = [0.0], [u]
    for step in range(steps):
        t = step * dt
        values = fgt_periodic(table, u, flat, dt)
        if problem.forcing is not None:
            for node, weight in zip(t + 0.5 * dt * (s + 1.0), 0.5 * dt * w):
                source = PiecewiseChebFunction.from_function(lambda x: problem.forcing(x, node), breakpoints, degree)
                values = values + weight * fgt_periodic(table, source, flat, t + dt - node)
        u = PiecewiseChebFunction.from_node_values(breakpoints, values.reshape(nodes.shape))
        if keep_profiles or step == steps - 1:
            times.append(t + dt)
            profiles.append(u)
        if verbose:
            print(f"{CYAN}[periodic]{RESET} step {step + 1}/{steps} t={t + dt:.4f}", flush=True)

    errors = {}
    if problem.exact is not None:
        errors["l2"] = l2_error(u, lambda x: problem.exact(x, problem.horizon))
    if verbose:
        print(f"{GREEN}[periodic] Time taken: {time.time() - start_time:.2f} seconds{RESET}", flush=True)
    return SolutionRecord(times=times, profiles=profiles, errors=errors)
