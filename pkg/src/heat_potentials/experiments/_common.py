from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd
from scipy import stats

from configuration import BLUE, GREEN, RESET, YELLOW
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.SolutionRecord import SolutionRecord
from heat_potentials.marching import snapshot_frame

SOURCE_WAVENUMBER = 10
SOURCE_PIECES = 64
SOURCE_ORDER = 16


def sine_source(pieces: int = SOURCE_PIECES, order: int = SOURCE_ORDER) -> PiecewiseChebFunction:
    """f(y) = sin(10 pi y) on [-1, 1]."""
    return PiecewiseChebFunction.from_function(
        lambda y: np.sin(SOURCE_WAVENUMBER * np.pi * y), np.linspace(-1.0, 1.0, pieces + 1), order
    )


def fit_order(refinements, errors) -> tuple[Optional[float], Optional[float]]:
    """Slope and R^2 of log(error) against log(refinement); None when fewer than two usable points.

    A negative slope -k means error = O(refinement^-k).
    """
    x, y = _usable(refinements, errors)
    if x.size < 2:
        return None, None
    fit = stats.linregress(np.log(x), np.log(y))
    return float(fit.slope), float(fit.rvalue**2)


def fit_geometric_rate(refinements, errors) -> tuple[Optional[float], Optional[float]]:
    """A and R^2 with error = O(A^-refinement)."""
    x, y = _usable(refinements, errors)
    if x.size < 2:
        return None, None
    fit = stats.linregress(x, np.log(y))
    return float(np.exp(-fit.slope)), float(fit.rvalue**2)


def _usable(refinements, errors) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(refinements, dtype=float)
    y = np.asarray(errors, dtype=float)
    keep = np.isfinite(y) & (y > 0)
    return x[keep], y[keep]


def write_table(frame: pd.DataFrame, out: Optional[str]) -> None:
    """CSV with a header row, to ``out`` or stdout."""
    if out is None:
        frame.to_csv(sys.stdout, index=False)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)


def export_solution(record: SolutionRecord, directory, stem: str) -> list[Path]:
    """Profile, front and snapshot tables of one run as ``<stem>-<kind>.csv`` files; empty tables are skipped."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    frames = {
        "profiles": record.profile_frame(),
        "front": record.front_frame(),
        "snapshots": snapshot_frame(record.snapshots),
    }
    written = []
    for kind, frame in frames.items():
        if frame.empty:
            continue
        path = directory / f"{stem}-{kind}.csv"
        frame.to_csv(path, index=False)
        written.append(path)
    return written


def print_row(tag: str, **fields) -> None:
    text = " ".join(f"{YELLOW}{key}{RESET}={_format(value)}" for key, value in fields.items())
    print(f"{BLUE}[{tag}]{RESET} {text}", flush=True, file=sys.stderr)


def print_elapsed(seconds: float) -> None:
    print(f"{GREEN}Time taken: {seconds:.2f} seconds{RESET}", flush=True, file=sys.stderr)


def _format(value) -> str:
    if isinstance(value, float):
        return f"{value:.3e}"
    return str(value)
