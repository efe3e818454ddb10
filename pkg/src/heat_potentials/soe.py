"""Sum-of-exponentials approximation of the Gaussian factor G(x, t) = exp(-x^2 / 4t).

The coefficients are computed offline by ``heat_potentials.soe_bootstrap`` and shipped
as a plain-text asset; this module only loads and validates them.
"""

from __future__ import annotations

from functools import lru_cache
from pathlib import Path

import numpy as np

from configuration import SOE_TABLE_PATH
from heat_potentials.domain.SoeTable import SoeTable
from heat_potentials.exceptions import AccuracyNotMet, NonPositiveTime, UnsupportedOrder

SUPPORTED_ORDERS = (8, 12, 16)
DEFAULT_TARGETS = {8: 1e-7, 12: 1e-10, 16: 1e-13}
MIN_TARGET = 1e-13

_VALIDATION_GRID = np.linspace(0.0, 20.0, 20001)


def read_soe_asset(path: Path | str = SOE_TABLE_PATH) -> dict[int, np.ndarray]:
    """Rows ``n k Re(w) Im(w) Re(t) Im(t)`` of the asset grouped by order."""
    rows = np.loadtxt(path, comments="#", ndmin=2)
    tables = {}
    for n in np.unique(rows[:, 0]).astype(int):
        block = rows[rows[:, 0] == n]
        tables[int(n)] = block[np.argsort(block[:, 1])]
    return tables


def soe_sum(weights: np.ndarray, nodes: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Full complex sum sum_k w_k exp(-2 t_k r), real part."""
    r = np.asarray(r, dtype=float)
    return np.real(np.exp(-2.0 * np.multiply.outer(r, nodes)) @ weights)


def soe_error(weights: np.ndarray, nodes: np.ndarray, r: np.ndarray) -> float:
    """Sup-norm error of the coefficients against exp(-r^2), summed in extended precision.

    The order-16 weights reach 1e2, so a double-precision sum adds rounding of a few 1e-14
    near r = 0 that is not part of the approximation.
    """
    return float(np.max(np.abs(soe_residual(weights, nodes, r))))


def soe_residual(weights: np.ndarray, nodes: np.ndarray, r: np.ndarray) -> np.ndarray:
    r = np.asarray(r, dtype=np.longdouble)
    terms = np.exp(-2 * np.multiply.outer(r, np.asarray(nodes, dtype=np.clongdouble)))
    return np.real(terms @ np.asarray(weights, dtype=np.clongdouble)) - np.exp(-(r**2))


def soe_kernel_error(table: SoeTable, r) -> np.ndarray:
    """Pointwise |exp(-r^2) - S_n(r)|."""
    r = np.asarray(r, dtype=float)
    return np.abs(np.exp(-r * r) - soe_sum(table.weights, table.nodes, r))


@lru_cache(maxsize=None)
def _load_table(order: int, path: str) -> SoeTable:
    rows = read_soe_asset(path).get(order)
    if rows is None or rows.shape[0] != order:
        raise AccuracyNotMet(f"asset {path} has no complete order-{order} table")
    weights = rows[:, 2] + 1j * rows[:, 3]
    nodes = rows[:, 4] + 1j * rows[:, 5]
    achieved = soe_error(weights, nodes, _VALIDATION_GRID)
    return SoeTable(order=order, weights=weights, nodes=nodes, achieved_error=achieved)


def load_soe_table(n: int, path: Path | str = SOE_TABLE_PATH) -> SoeTable:
    """The shipped order-``n`` table, with no target check."""
    if n not in SUPPORTED_ORDERS:
        raise UnsupportedOrder(f"order {n} is not one of {SUPPORTED_ORDERS}")
    return _load_table(n, str(path))


def generate_soe_table(n: int, target_err: float | None = None, path: Path | str = SOE_TABLE_PATH) -> SoeTable:
    """Validated order-``n`` table whose sup-norm error on r in [0, 20] is at most ``target_err``.

    Args:
        n: number of exponentials, one of 8, 12, 16.
        target_err: requested bound, defaults to the order's documented target.
        path: coefficient asset.

    Returns:
        The table with ``achieved_error`` measured on 20001 points of [0, 20].
    """
    if n not in SUPPORTED_ORDERS:
        raise UnsupportedOrder(f"order {n} is not one of {SUPPORTED_ORDERS}")
    target = DEFAULT_TARGETS[n] if target_err is None else float(target_err)
    if target < MIN_TARGET:
        raise AccuracyNotMet(f"targets below {MIN_TARGET:g} cannot be validated in double precision")
    table = _load_table(n, str(path))
    if table.achieved_error > target:
        raise AccuracyNotMet(f"order {n} reaches {table.achieved_error:.3e}, above the requested {target:.3e}")
    return table


def soe_eval(table: SoeTable, x, t: float, halved: bool = True):
    """Re(sum_k w_k exp(-t_k |x| / sqrt(t))), the SOE stand-in for exp(-x^2 / 4t)."""
    if t <= 0:
        raise NonPositiveTime(f"t={t} must be positive")
    x = np.asarray(x, dtype=float)
    scaled = np.abs(x) / np.sqrt(t)
    if not halved:
        result = np.real(np.exp(-np.multiply.outer(scaled, table.nodes)) @ table.weights)
    else:
        reps = table.representatives
        terms = np.exp(-np.multiply.outer(scaled, table.nodes[reps])) * table.weights[reps]
        result = np.real(terms) @ table.multiplicity
    return float(result) if result.ndim == 0 else result


def table_for_tol(tol: float) -> SoeTable:
    """Cheapest supported table whose validated error is within ``tol``."""
    for n in SUPPORTED_ORDERS:
        if load_soe_table(n).achieved_error <= tol:
            return generate_soe_table(n)
    return generate_soe_table(SUPPORTED_ORDERS[-1])
