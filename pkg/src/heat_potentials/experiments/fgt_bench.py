"""Accuracy and timing of the periodic and free-space transforms on f(y) = sin(10 pi y)."""

from __future__ import annotations

import time

import numpy as np
import pandas as pd

from heat_potentials.domain.ExperimentConfig import ExperimentConfig
from heat_potentials.domain.FgtMode import FgtMode
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.experiments._common import print_elapsed, print_row, sine_source
from heat_potentials.fgt import fgt_periodic, heat_convolve
from heat_potentials.oracle import oracle_gauss_conv
from heat_potentials.soe import generate_soe_table

COLUMNS = ["mode", "n", "t", "M", "linf_error", "seconds"]
PERIOD = 2.0


def periodic_oracle(f: PiecewiseChebFunction, x: float, t: float, radius: float = 14.0) -> float:
    """Sum of free-space oracle values over the images of the cell within radius * sqrt(t)."""
    reach = int(np.ceil((radius * np.sqrt(t) + PERIOD) / PERIOD))
    return float(sum(oracle_gauss_conv(f, x - PERIOD * m, t) for m in range(-reach, reach + 1)))


def run_fgt_bench(config: ExperimentConfig, verbose: bool = True) -> pd.DataFrame:
    f = sine_source()
    rng = np.random.default_rng(config.seed)
    targets = np.linspace(-1.0, 1.0, config.targets)
    sample = np.sort(rng.choice(targets.size, size=min(config.oracle_samples, targets.size), replace=False))
    start_time = time.time()

    rows = []
    for n in config.soe_orders:
        table = generate_soe_table(n)
        for t in config.times:
            for mode in (FgtMode.PERIODIC, FgtMode.NONPERIODIC):
                transform = fgt_periodic if mode == FgtMode.PERIODIC else heat_convolve
                oracle = periodic_oracle if mode == FgtMode.PERIODIC else oracle_gauss_conv
                seconds = []
                for _ in range(config.repeats):
                    tic = time.perf_counter()
                    values = transform(table, f, targets, t)
                    seconds.append(time.perf_counter() - tic)
                reference = np.array([oracle(f, float(x), t) for x in targets[sample]])
                row = {
                    "mode": str(mode),
                    "n": n,
                    "t": t,
                    "M": config.targets,
                    "linf_error": float(np.max(np.abs(values[sample] - reference))),
                    "seconds": float(np.median(seconds)),
                }
                rows.append(row)
                if verbose:
                    print_row("fgt-bench", **row)
    if verbose:
        print_elapsed(time.time() - start_time)
    return pd.DataFrame(rows, columns=COLUMNS)
