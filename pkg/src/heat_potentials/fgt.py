"""Fast Gauss transforms built on the sum-of-exponentials table.

With tau_k = t_k / sqrt(t) every Gaussian exp(-(x - y)^2 / 4t) becomes a short sum of
one-sided exponentials, and each exponential is swept across a merged grid of
breakpoints and targets: forward for the sources on the left, backward for the
sources on the right. One representative per conjugate pair is swept and its real
part doubled.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import chebyshev

from configuration import SERIES_T_MAX, TRUNCATION_RADIUS
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.SoeTable import SoeTable
from heat_potentials.domain.SweepState import SweepState
from heat_potentials.exceptions import NonPositiveTime, TargetOutOfCell, TargetOutOfDomain, TimeTooLarge, UnsortedInput
from heat_potentials.quadrature import gauss_legendre
from heat_potentials.soe import table_for_tol

# exp(-40) relative truncation of the moment windows
_MOMENT_WINDOW = 40.0
# largest |tau| * width handled by one Gauss-Legendre panel
_PANEL_PHASE = 4.0
_MIN_MOMENT_ORDER = 16


def _check_time(t: float) -> None:
    if not t > 0:
        raise NonPositiveTime(f"t={t} must be positive")


def _sorted(values, name: str) -> np.ndarray:
    values = np.atleast_1d(np.asarray(values, dtype=float))
    if np.any(np.diff(values) < 0):
        raise UnsortedInput(f"{name} must be sorted ascending")
    return values


def _nodes(table: SoeTable, halved: bool) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(nodes, weights, multiplicities) actually swept."""
    if halved:
        reps = table.representatives
        return table.nodes[reps], table.weights[reps], table.multiplicity
    return table.nodes, table.weights, np.ones(table.order)


def _combine(weights: np.ndarray, mult: np.ndarray, terms: np.ndarray) -> np.ndarray:
    return (mult[:, None] * np.real(weights[:, None] * terms)).sum(axis=0)


def _scan(beta: np.ndarray, inc: np.ndarray) -> np.ndarray:
    """x_0 = inc_0, x_m = beta_m x_{m-1} + inc_m along the last axis."""
    out = np.empty_like(inc)
    out[:, 0] = inc[:, 0]
    for m in range(1, inc.shape[1]):
        out[:, m] = beta[:, m] * out[:, m - 1] + inc[:, m]
    return out


def _piece_values(f: PiecewiseChebFunction, pieces: np.ndarray, y: np.ndarray) -> np.ndarray:
    out = np.empty_like(y)
    for j in np.unique(pieces):
        rows = pieces == j
        out[rows] = f.evaluate_piece(int(j), y[rows])
    return out


def _window_moments(
    f: PiecewiseChebFunction, pieces: np.ndarray, anchors: np.ndarray, windows: np.ndarray, tau: complex, order: int
) -> np.ndarray:
    """int over |anchor - y| <= |window| of exp(-tau |anchor - y|) f(y) dy for every interval at once.

    A negative window lies to the right of its anchor. Each window is cut into equal panels
    of phase at most ``_PANEL_PHASE``, and all panels are evaluated together.
    """
    x, w = gauss_legendre(order)
    counts = np.maximum(1, np.ceil(np.abs(tau) * np.abs(windows) / _PANEL_PHASE)).astype(int)
    owner = np.repeat(np.arange(windows.size), counts)
    slot = np.arange(owner.size) - np.repeat(np.cumsum(counts) - counts, counts)
    step = np.abs(windows[owner]) / counts[owner]
    distance = (slot + 0.5)[:, None] * step[:, None] + 0.5 * step[:, None] * x[None, :]
    y = anchors[owner][:, None] - np.sign(windows[owner])[:, None] * distance
    values = _piece_values(f, np.repeat(pieces[owner][:, None], order, axis=1), y)
    panels = (0.5 * step[:, None] * w[None, :] * np.exp(-tau * distance) * values).sum(axis=1)
    out = np.zeros(windows.size, dtype=complex)
    np.add.at(out, owner, panels)
    return out


def _moments(f: PiecewiseChebFunction, grid: np.ndarray, taus: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """I_i = int exp(-tau (g_{i+1} - y)) f and J_i = int exp(-tau (y - g_i)) f per grid interval, shape (K, G)."""
    lo, hi = grid[:-1], grid[1:]
    width = hi - lo
    order = max(max(f.orders) + 8, _MIN_MOMENT_ORDER)
    x, w = gauss_legendre(order)
    pieces = np.asarray(f.piece_index(0.5 * (lo + hi)), dtype=int)
    half = 0.5 * width
    y = 0.5 * (lo + hi)[:, None] + half[:, None] * x[None, :]
    weighted = half[:, None] * w[None, :] * _piece_values(f, np.repeat(pieces[:, None], order, axis=1), y)
    to_right = half[:, None] * (1.0 - x)[None, :]
    to_left = half[:, None] * (1.0 + x)[None, :]

    moments_right = np.zeros((taus.size, width.size), dtype=complex)
    moments_left = np.zeros_like(moments_right)
    for k, tau in enumerate(taus):
        window = np.minimum(width, _MOMENT_WINDOW / tau.real)
        fast = np.ceil(np.abs(tau) * window / _PANEL_PHASE) <= 1
        moments_right[k, fast] = np.einsum("gm,gm->g", weighted[fast], np.exp(-tau * to_right[fast]))
        moments_left[k, fast] = np.einsum("gm,gm->g", weighted[fast], np.exp(-tau * to_left[fast]))
        slow = ~fast
        if np.any(slow):
            moments_right[k, slow] = _window_moments(f, pieces[slow], hi[slow], window[slow], tau, order)
            moments_left[k, slow] = _window_moments(f, pieces[slow], lo[slow], -window[slow], tau, order)
    return moments_right, moments_left


def _merged_grid(f: PiecewiseChebFunction, points: np.ndarray) -> np.ndarray:
    a, b = f.domain
    inside = points[(points >= a) & (points <= b)]
    return np.unique(np.concatenate((f.breakpoints, inside)))


def sweep_state(
    table: SoeTable, f: PiecewiseChebFunction, nodes, t: float, periodic: bool = False, halved: bool = True
) -> SweepState:
    """Accumulators of the continuous transform on the grid merging ``nodes`` with the breakpoints of f.

    h_plus[k, i] = int_{x_0}^{g_i} exp(-tau_k (g_i - y)) f(y) dy and h_minus the mirror image.
    With ``periodic`` the image accumulators of the period cell [-1, 1] are filled too.
    """
    _check_time(t)
    taus = _nodes(table, halved)[0] / np.sqrt(t)
    grid = _merged_grid(f, _sorted(nodes, "nodes"))
    beta = np.exp(-np.multiply.outer(taus, np.diff(grid)))
    moments_right, moments_left = _moments(f, grid, taus)

    ones = np.ones((taus.size, 1), dtype=complex)
    zeros = np.zeros((taus.size, 1), dtype=complex)
    h_plus = _scan(np.hstack((ones, beta)), np.hstack((zeros, moments_right)))
    h_minus = _scan(np.hstack((ones, beta[:, ::-1])), np.hstack((zeros, moments_left[:, ::-1])))[:, ::-1]

    g_plus = g_minus = None
    if periodic:
        shift = np.exp(-2.0 * taus)[:, None]
        g_plus = _scan(np.hstack((ones, beta)), np.hstack((h_plus[:, -1:], -shift * moments_right)))
        g_minus = _scan(
            np.hstack((ones, beta[:, ::-1])), np.hstack((h_minus[:, :1], -shift * moments_left[:, ::-1]))
        )[:, ::-1]
    return SweepState(
        grid=grid,
        tau=taus,
        beta=beta,
        moments_right=moments_right,
        moments_left=moments_left,
        h_plus=h_plus,
        h_minus=h_minus,
        g_plus=g_plus,
        g_minus=g_minus,
    )


def fgt_discrete(table: SoeTable, sources, charges, targets, t: float, halved: bool = True) -> np.ndarray:
    """u_i = sum_j exp(-(x_i - y_j)^2 / 4t) alpha_j by one sweep over the merged points."""
    _check_time(t)
    sources = _sorted(sources, "sources")
    targets = _sorted(targets, "targets")
    charges = np.broadcast_to(np.asarray(charges, dtype=float), sources.shape)
    nodes, weights, mult = _nodes(table, halved)
    taus = nodes / np.sqrt(t)

    # sources precede targets at equal positions so a coincident source is counted once, forward
    points = np.concatenate((sources, targets))
    is_target = np.concatenate((np.zeros(sources.size, bool), np.ones(targets.size, bool)))
    order = np.lexsort((is_target, points))
    points, is_target = points[order], is_target[order]
    inc = np.concatenate((charges, np.zeros(targets.size)))[order]

    steps = np.exp(-np.multiply.outer(taus, np.diff(points)))
    ones = np.ones((taus.size, 1), dtype=complex)
    forward = _scan(np.hstack((ones, steps)), np.broadcast_to(inc, (taus.size, inc.size)).astype(complex))
    # strictly-right sums: B_m = step_m (B_{m+1} + c_{m+1})
    shifted = np.hstack((inc[1:], [0.0]))
    backward = _scan(
        np.hstack((ones, steps[:, ::-1])),
        np.broadcast_to(shifted[::-1], (taus.size, inc.size)) * np.hstack((np.zeros((taus.size, 1)), steps[:, ::-1])),
    )[:, ::-1]
    terms = (forward + backward)[:, is_target]
    return _combine(weights, mult, terms)


def fgt_continuous(
    table: SoeTable, f: PiecewiseChebFunction, targets, t: float, halved: bool = True
) -> np.ndarray:
    """(1 / sqrt(4 pi t)) int_a^b exp(-(x_i - y)^2 / 4t) f(y) dy; targets may lie outside [a, b]."""
    _check_time(t)
    targets = _sorted(targets, "targets")
    a, b = f.domain
    nodes, weights, mult = _nodes(table, halved)
    state = sweep_state(table, f, targets, t, halved=halved)

    terms = np.zeros((nodes.size, targets.size), dtype=complex)
    left, right = targets < a, targets > b
    inside = ~(left | right)
    idx = np.searchsorted(state.grid, targets[inside])
    terms[:, inside] = state.h_plus[:, idx] + state.h_minus[:, idx]
    terms[:, left] = np.exp(-np.multiply.outer(state.tau, a - targets[left])) * state.h_minus[:, :1]
    terms[:, right] = np.exp(-np.multiply.outer(state.tau, targets[right] - b)) * state.h_plus[:, -1:]
    return _combine(weights, mult, terms) / np.sqrt(4.0 * np.pi * t)


def fgt_periodic(
    table: SoeTable, f: PiecewiseChebFunction, targets, t: float, halved: bool = True
) -> np.ndarray:
    """Convolution of f with the heat kernel periodized over the cell f.domain."""
    _check_time(t)
    targets = _sorted(targets, "targets")
    lo, hi = f.domain
    span = 1e-13 * (hi - lo)
    if targets.size and (targets[0] < lo - span or targets[-1] > hi + span):
        raise TargetOutOfCell(f"targets must lie in the cell [{lo}, {hi}]")
    center, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    cell = f.affine(center, half)
    local = np.clip((targets - center) / half, -1.0, 1.0)
    scaled_t = t / half**2

    nodes, weights, mult = _nodes(table, halved)
    state = sweep_state(table, cell, local, scaled_t, periodic=True, halved=halved)
    idx = np.searchsorted(state.grid, local)
    terms = state.h_plus[:, idx] + state.h_minus[:, idx] + state.g_plus[:, idx] + state.g_minus[:, idx]
    terms = terms / (1.0 - np.exp(-2.0 * state.tau))[:, None]
    return _combine(weights, mult, terms) / np.sqrt(4.0 * np.pi * scaled_t)


def _series_values(f: PiecewiseChebFunction, targets: np.ndarray, t: float) -> np.ndarray:
    """sum_m P^{(2m)}(x) t^m / m! with P the piece holding x."""
    out = np.empty_like(targets)
    pieces = f.piece_index(targets)
    widths = np.diff(f.breakpoints)
    for j in np.unique(pieces):
        rows = pieces == j
        coeffs = f.coeffs[j]
        total = coeffs.copy()
        term, m = coeffs, 0
        while term.size > 2:
            m += 1
            term = chebyshev.chebder(term, 2, scl=2.0 / widths[j])
            total[: term.size] += term * t**m / math.factorial(m)
        out[rows] = chebyshev.chebval(f.local_coordinate(targets[rows], j), total)
    return out


def _windowed(table: SoeTable, f: PiecewiseChebFunction, targets: np.ndarray, t: float) -> np.ndarray:
    """Clusters of span <= 2R sqrt(t), each convolved with f restricted to the cluster +- R sqrt(t)."""
    a, b = f.domain
    reach = TRUNCATION_RADIUS * np.sqrt(t)
    out = np.zeros_like(targets)
    bins = np.floor((targets - targets[0]) / (2.0 * reach)).astype(int)
    _, starts = np.unique(bins, return_index=True)
    for start, stop in zip(starts, np.append(starts[1:], targets.size)):
        chunk = targets[start:stop]
        lo, hi = max(a, chunk[0] - reach), min(b, chunk[-1] + reach)
        if hi <= lo:
            continue
        center, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        window = f.restrict(lo, hi).affine(center, half)
        out[start:stop] = fgt_continuous(table, window, (chunk - center) / half, t / half**2)
    return out


def fgt_small_t(
    f: PiecewiseChebFunction, targets, t: float, tol: float = 1e-12, table: SoeTable | None = None
) -> np.ndarray:
    """Heat convolution of f for small t: Taylor series away from breakpoints, rescaled SOE near them."""
    _check_time(t)
    if t > SERIES_T_MAX:
        raise TimeTooLarge(f"t={t} exceeds the series threshold {SERIES_T_MAX}")
    targets = _sorted(targets, "targets")
    a, b = f.domain
    if targets.size and (targets[0] < a or targets[-1] > b):
        raise TargetOutOfDomain(f"targets must lie in [{a}, {b}]")
    table = table or table_for_tol(tol)

    reach = TRUNCATION_RADIUS * np.sqrt(t)
    gaps = np.abs(targets[:, None] - f.breakpoints[None, :]).min(axis=1) if targets.size else targets
    interior = gaps > reach
    out = np.empty_like(targets)
    out[interior] = _series_values(f, targets[interior], t)
    if np.any(~interior):
        out[~interior] = _windowed(table, f, targets[~interior], t)
    return out


def heat_convolve(table: SoeTable, f: PiecewiseChebFunction, targets, t: float) -> np.ndarray:
    """int_a^b K(x - y, t) f(y) dy at arbitrary sorted targets, dispatching on t."""
    _check_time(t)
    targets = _sorted(targets, "targets")
    a, b = f.domain
    reach = TRUNCATION_RADIUS * np.sqrt(t)
    if not (2.0 * reach <= b - a and t <= SERIES_T_MAX):
        return fgt_continuous(table, f, targets, t)

    out = np.zeros_like(targets)
    inside = (targets >= a) & (targets <= b)
    near = ~inside & (targets > a - reach) & (targets < b + reach)
    if np.any(inside):
        out[inside] = fgt_small_t(f, targets[inside], t, table=table)
    if np.any(near):
        out[near] = _windowed(table, f, targets[near], t)
    return out
