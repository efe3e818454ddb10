"""Refinement ladders for the integral-equation solver and the three problem drivers."""

from __future__ import annotations

import time
from typing import Callable

import numpy as np
import pandas as pd

from configuration import T0, TC
from heat_potentials.domain.DensityPair import DensityPair
from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.domain.ExperimentCommand import ExperimentCommand
from heat_potentials.domain.ExperimentConfig import ExperimentConfig
from heat_potentials.domain.MarchSettings import MarchSettings
from heat_potentials.domain.SolutionRecord import SolutionRecord
from heat_potentials.domain.StefanFlux import StefanFlux
from heat_potentials.domain.VolterraSettings import VolterraSettings
from heat_potentials.exceptions import ConfigInvalid
from heat_potentials.experiments._common import export_solution, fit_geometric_rate, fit_order, print_elapsed, print_row
from heat_potentials.soe import generate_soe_table
from heat_potentials.use_cases.dirichlet_heat import (
    density_plan,
    dirichlet_problem,
    solve_dirichlet_moving,
    volterra_benchmark,
)
from heat_potentials.use_cases.periodic_heat import periodic_problem, solve_periodic
from heat_potentials.use_cases.stefan import solve_stefan, stefan_problem
from heat_potentials.volterra import solve_density

COLUMNS = ["experiment", "order_param", "refinement", "error", "fitted_slope", "r2"]
# exponential panels kept fixed while the normal zone is refined
NORMAL_ZONE_EXP_PANELS = 32
DENSITY_SAMPLES = 64
# marched profile times of an exported Dirichlet run
EXPORT_STEPS = 4


def _export(config: ExperimentConfig, record: SolutionRecord, stem: str) -> None:
    if config.export_dir is not None:
        export_solution(record, config.export_dir, stem)


def _density_gap(density: DensityPair, reference: DensityPair, times: np.ndarray) -> float:
    gap_a = np.max(np.abs(density.a(times) - reference.a(times)))
    return float(max(gap_a, np.max(np.abs(density.b(times) - reference.b(times)))))


def _zone_plan(zone: DensityZone, horizon: float, panels: int):
    if zone == DensityZone.EXPONENTIAL:
        return density_plan(min(horizon, T0), panels, 0)
    return density_plan(horizon, NORMAL_ZONE_EXP_PANELS, panels)


def _zone_times(zone: DensityZone, horizon: float) -> np.ndarray:
    if zone == DensityZone.EXPONENTIAL:
        return np.geomspace(TC, min(horizon, T0), DENSITY_SAMPLES + 2)[1:-1]
    return np.linspace(T0, horizon, DENSITY_SAMPLES + 2)[1:-1]


def volterra_ladder(config: ExperimentConfig, order: int) -> list[float]:
    """Self-convergence of the densities against a run with twice the finest panel count."""
    horizon = config.horizon or 1.0
    domain, data = volterra_benchmark(horizon)
    settings = VolterraSettings(L=order + 1, M=order, tol=config.tol, soe_order=config.soe_orders[0])
    table = generate_soe_table(settings.soe_order)

    def run(panels: int) -> DensityPair:
        return solve_density(domain, data, _zone_plan(config.zone, horizon, panels), settings, table)

    reference = run(2 * max(config.refinements))
    times = _zone_times(config.zone, horizon)
    return [_density_gap(run(panels), reference, times) for panels in config.refinements]


def periodic_ladder(config: ExperimentConfig, order: int, wavenumber: int) -> list[float]:
    problem = periodic_problem(wavenumber, horizon=config.horizon or 1.0)
    table = generate_soe_table(config.soe_orders[0])
    finest = max(config.refinements)
    errors = []
    for steps in config.refinements:
        keep = steps == finest and config.export_dir is not None
        record = solve_periodic(problem, steps, order, table, keep_profiles=keep)
        errors.append(record.errors["l2"])
        if keep:
            _export(config, record, f"periodic-heat-k{wavenumber}-order{order}")
    return errors


def dirichlet_ladder(config: ExperimentConfig, order: int, wavenumber: int) -> list[float]:
    """L2 error at t0 (exponential zone) or at the horizon (normal zone) against the closed form."""
    exponential = config.zone == DensityZone.EXPONENTIAL
    horizon = min(config.horizon or T0, T0) if exponential else config.horizon or 0.2
    problem = dirichlet_problem(wavenumber, horizon=horizon)
    settings = VolterraSettings(L=order, M=order, tol=config.tol, soe_order=config.soe_orders[0])
    table = generate_soe_table(settings.soe_order)
    errors = []
    for panels in config.refinements:
        plan = _zone_plan(config.zone, horizon, panels)
        record, _ = solve_dirichlet_moving(problem, plan, [horizon], settings, table=table)
        errors.append(record.errors["l2"])
    if config.export_dir is not None:
        # the finest plan again, marched, so the double-layer snapshots are exported too
        plan = _zone_plan(config.zone, horizon, max(config.refinements))
        times = horizon * np.arange(1, EXPORT_STEPS + 1) / EXPORT_STEPS
        march_settings = MarchSettings(tol=config.tol, soe_order=settings.soe_order)
        record, _ = solve_dirichlet_moving(problem, plan, times, settings, march_settings, table=table)
        _export(config, record, f"dirichlet-heat-k{wavenumber}-{config.zone}-order{order}")
    return errors


def stefan_ladder(config: ExperimentConfig, order: int, rounds: int) -> list[float]:
    """|s(T) - s_ref(T)|: against the similarity solution, or a run with twice the panels for the modified flux."""
    problem = stefan_problem(config.flux, horizon=config.horizon or 1.0)
    settings = VolterraSettings(L=order + 1, M=order, tol=config.tol, soe_order=config.soe_orders[0])
    table = generate_soe_table(settings.soe_order)

    def run(panels: int) -> SolutionRecord:
        return solve_stefan(problem, panels, order, rounds, settings, table=table)

    records = {panels: run(panels) for panels in config.refinements}
    _export(config, records[max(config.refinements)], f"stefan-{config.flux}-l{rounds}-order{order}")
    if config.flux == StefanFlux.CLASSICAL:
        return [records[panels].errors["front"] for panels in config.refinements]
    reference = run(2 * max(config.refinements)).errors["s_end"]
    return [abs(records[panels].errors["s_end"] - reference) for panels in config.refinements]


def _ladders(config: ExperimentConfig) -> list[tuple[str, int, Callable[[], list[float]], Callable]]:
    command = config.command
    if command == ExperimentCommand.VOLTERRA_CONV:
        name = f"volterra-{config.zone}"
        return [(name, order, lambda order=order: volterra_ladder(config, order), fit_order) for order in config.orders]
    if command == ExperimentCommand.PERIODIC_HEAT:
        return [
            (
                f"periodic-heat-k{k}",
                order,
                lambda order=order, k=k: periodic_ladder(config, order, k),
                fit_geometric_rate,
            )
            for k in config.wavenumbers
            for order in config.orders
        ]
    if command == ExperimentCommand.DIRICHLET_HEAT:
        return [
            (
                f"dirichlet-heat-k{k}-{config.zone}",
                order,
                lambda order=order, k=k: dirichlet_ladder(config, order, k),
                fit_order,
            )
            for k in config.wavenumbers
            for order in config.orders
        ]
    if command == ExperimentCommand.STEFAN:
        return [
            (
                f"stefan-{config.flux}-l{rounds}",
                order,
                lambda order=order, rounds=rounds: stefan_ladder(config, order, rounds),
                fit_order,
            )
            for rounds in config.sdc_rounds
            for order in config.orders
        ]
    raise ConfigInvalid(f"{command} is not a convergence experiment")


def run_convergence(config: ExperimentConfig, verbose: bool = True) -> pd.DataFrame:
    """One row per (order, refinement); the fitted slope and R^2 repeat over the rows of a ladder.

    Periodic ladders report the geometric rate A of error = O(A^-steps) in ``fitted_slope``.
    """
    start_time = time.time()
    rows = []
    for name, order, ladder, fit in _ladders(config):
        errors = ladder()
        slope, r2 = fit(config.refinements, errors)
        for refinement, error in zip(config.refinements, errors):
            row = {
                "experiment": name,
                "order_param": order,
                "refinement": refinement,
                "error": float(error),
                "fitted_slope": slope,
                "r2": r2,
            }
            rows.append(row)
            if verbose:
                print_row("convergence", **row)
    if verbose:
        print_elapsed(time.time() - start_time)
    return pd.DataFrame(rows, columns=COLUMNS)
