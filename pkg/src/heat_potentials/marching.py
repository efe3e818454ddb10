"""Double-layer heat potential D[phi] = -I[a, phi_a] + I[b, phi_b] in space-time.

Direct evaluation integrates the whole time history. Marching keeps a snapshot of
z -> D(z, t) on an adaptive mesh and advances it by one heat-kernel convolution per
step, adding only the local part of the newest time step.
"""

from __future__ import annotations

import math
from typing import Iterator, Optional

import numpy as np
import pandas as pd

from configuration import BLUE, CRAMER_C, GREEN, RESET, TOL, TRUNCATION_RADIUS, YELLOW
from heat_potentials.domain.AdaptiveMesh import AdaptiveMesh
from heat_potentials.domain.DensityPair import DensityPair
from heat_potentials.domain.DensityRepresentation import DensityRepresentation
from heat_potentials.domain.LayerKind import LayerKind
from heat_potentials.domain.LocalIntegralSpec import LocalIntegralSpec
from heat_potentials.domain.MarchSettings import MarchSettings
from heat_potentials.domain.MovingDomain import MovingDomain
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.PotentialSnapshot import PotentialSnapshot
from heat_potentials.domain.SoeTable import SoeTable
from heat_potentials.domain.Trajectory import Trajectory
from heat_potentials.exceptions import InvalidSpec, NonPositiveTime, OnBoundary
from heat_potentials.fgt import heat_convolve
from heat_potentials.quadrature import (
    SQRT_PI,
    default_eps,
    heat_kernel,
    history_rule,
    local_history_integral,
    local_rule,
)
from heat_potentials.soe import generate_soe_table

_SIGN = {"a": -1.0, "b": 1.0}
_ON_BOUNDARY = 1e-14
_CALIBRATION_SAMPLES = 33


def _sides(density: DensityPair, domain: MovingDomain) -> Iterator[tuple[DensityRepresentation, Trajectory, float]]:
    for side in ("a", "b"):
        yield density.side(side), domain.boundary(side), _SIGN[side]


def _rule_options(rep: DensityRepresentation) -> dict:
    return {"t0": rep.t0, "tC": rep.tC, "joints": tuple(float(j) for j in rep.joints)}


def history_potential(
    density: DensityPair, domain: MovingDomain, targets, t: float, lag: float = 0.0, tol: float = TOL
) -> np.ndarray:
    """Part of D[phi](x, t) generated before t - lag.

    With ``lag = 0`` this is the whole potential, taken as the principal value for
    targets on the boundary.
    """
    if not t > 0:
        raise NonPositiveTime(f"t={t} must be positive")
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    total = np.zeros(targets.shape)
    for rep, gamma, sign in _sides(density, domain):
        if lag >= t:
            continue
        if lag > 0:
            rule = history_rule(gamma, targets, lag, t, tol, hint=rep, **_rule_options(rep))
        else:
            rule = local_rule(gamma, targets, t, t, tol, hint=rep, **_rule_options(rep))
        total += sign * rule.apply(rep, rep.derivative)
    return total


def dlhp_values(density: DensityPair, domain: MovingDomain, targets, t: float, tol: float = TOL) -> np.ndarray:
    return history_potential(density, domain, targets, t, 0.0, tol)


def dlhp_eval(density: DensityPair, domain: MovingDomain, x: float, t: float, tol: float = TOL) -> float:
    """D[phi](x, t) off the boundary, one local history integral per side."""
    if not t > 0:
        raise NonPositiveTime(f"t={t} must be positive")
    for end in domain.ends(t):
        if abs(x - end) <= _ON_BOUNDARY * max(1.0, abs(x)):
            raise OnBoundary(f"x={x} lies on the boundary at t={t}")
    total = 0.0
    for rep, gamma, sign in _sides(density, domain):
        spec = LocalIntegralSpec(
            y=x,
            gamma=gamma,
            phi=rep,
            phi_slope=rep.derivative,
            a=t,
            b=t,
            eps=default_eps(t, tol),
            **_rule_options(rep),
        )
        total += sign * local_history_integral(spec, tol)
    return total


def spacing_cap_factor(t: float, order: int) -> float:
    """Shrink factor of the scaled spacing for t > 1, growing like (ln t)^{1/(n+1)}."""
    return float(max(1.0, np.log(t)) ** (1.0 / (order + 1)))


def _remainder_coefficient(t: float, order: int, lam: float, mu: float, cramer_c: float) -> float:
    # Taylor remainder of the smoothed potential over an interval of width alpha sqrt(t) is coefficient * alpha^{n+1}
    n = order
    k = np.arange(1, n + 1)
    roots = np.sqrt([float(math.factorial(j)) for j in k])
    scale = float(math.factorial(n + 1))
    head = cramer_c * lam / (scale * SQRT_PI) * np.sum(roots * t ** ((n - k) / 2.0) / 2.0 ** (n + k / 2.0 + 2.0))
    tail = (lam + mu * np.sqrt(t)) * t ** ((n + 1) / 2.0) / (scale * 2.0 ** (n + 1))
    return float(head + tail)


def mesh_alpha(
    t: float, order: int, tol: float, lam: float = 1.0, mu: float = 0.0, cramer_c: float = CRAMER_C
) -> float:
    """Scaled spacing alpha with near-boundary intervals of width alpha sqrt(t) meeting ``tol``."""
    if t > 1.0:
        return mesh_alpha(1.0, order, tol, lam, mu, cramer_c) / spacing_cap_factor(t, order)
    return float((tol / _remainder_coefficient(t, order, lam, mu, cramer_c)) ** (1.0 / (order + 1)))


def _balance(edges: np.ndarray) -> np.ndarray:
    """Bisect intervals until neighbours differ by at most a factor 2."""
    edges = np.asarray(edges, dtype=float)
    while True:
        widths = np.diff(edges)
        if widths.size < 2:
            return edges
        too_wide = np.zeros(widths.size, dtype=bool)
        too_wide[1:] |= widths[1:] > 2.0 * widths[:-1]
        too_wide[:-1] |= widths[:-1] > 2.0 * widths[1:]
        if not np.any(too_wide):
            return edges
        mids = 0.5 * (edges[:-1] + edges[1:])[too_wide]
        edges = np.sort(np.concatenate((edges, mids)))


def _outward(first: float, spacing: float, reach: float, t: float, order: int) -> np.ndarray:
    """Interval widths moving away from the hull: spacing * exp(d^2 / 8t(n+1)), at most doubling."""
    widths, covered, previous = [], 0.0, first
    while covered < reach:
        width = min(spacing * np.exp(covered**2 / (8.0 * t * (order + 1))), 2.0 * previous)
        widths.append(width)
        covered += width
        previous = width
    return np.array(widths)


def build_adaptive_mesh(
    domain: MovingDomain,
    t: float,
    order: int = 16,
    tol: float = TOL,
    lam: float = 1.0,
    mu: float = 0.0,
    radius: float = TRUNCATION_RADIUS,
    cramer_c: float = CRAMER_C,
) -> AdaptiveMesh:
    """Mesh over the boundary hull widened by radius * sqrt(t), with edges at a(t) and b(t)."""
    if not t > 0:
        raise NonPositiveTime(f"t={t} must be positive")
    alpha = mesh_alpha(t, order, tol, lam, mu, cramer_c)
    spacing = alpha * np.sqrt(t)
    lo, hi = domain.hull(t)
    a_t, b_t = domain.ends(t)
    lo, hi = min(lo, a_t), max(hi, b_t)
    # snap hull ends that nearly coincide with the boundary
    lo = a_t if a_t - lo < 1e-3 * spacing else lo
    hi = b_t if hi - b_t < 1e-3 * spacing else hi

    anchors = np.unique([lo, a_t, b_t, hi])
    inner = [anchors[:1]]
    for left, right in zip(anchors[:-1], anchors[1:]):
        count = max(1, int(np.ceil((right - left) / spacing)))
        inner.append(np.linspace(left, right, count + 1)[1:])
    inner = _balance(np.concatenate(inner))
    widths = np.diff(inner)

    reach = radius * np.sqrt(t)
    left_widths = _outward(widths[0], spacing, reach, t, order)
    right_widths = _outward(widths[-1], spacing, reach, t, order)
    edges = np.concatenate((inner[0] - np.cumsum(left_widths)[::-1], inner, inner[-1] + np.cumsum(right_widths)))
    return AdaptiveMesh(t=t, edges=edges, order=order, near_spacing=spacing, alpha=alpha)


def calibrate_envelope(
    density: DensityPair, domain: MovingDomain, t: float, tol: float = TOL, samples: int = _CALIBRATION_SAMPLES
) -> tuple[float, float]:
    """(lambda, mu): sampled bounds of |D| and |dD/dy| near the boundary at time t."""
    a_t, b_t = domain.ends(t)
    reach = 4.0 * np.sqrt(t)
    x = np.linspace(a_t - reach, b_t + reach, samples)
    # keep the samples off the boundary
    x = x + 0.5 * (x[1] - x[0]) * 0.618
    values = dlhp_values(density, domain, x, t, tol)
    slopes = np.diff(values) / np.diff(x)
    return float(max(np.max(np.abs(values)), tol)), float(np.max(np.abs(slopes)))


def history_advance(prev: PotentialSnapshot, mesh: AdaptiveMesh, dt: float, table: SoeTable) -> np.ndarray:
    """D_H at the nodes of ``mesh``: the previous snapshot convolved with K(., dt)."""
    nodes = mesh.nodes
    return heat_convolve(table, prev.values, nodes.ravel(), dt).reshape(nodes.shape)


def local_advance(
    density: DensityPair, domain: MovingDomain, targets, t: float, dt: float, tol: float = TOL
) -> np.ndarray:
    """D_L: the potential generated during (t - dt, t]."""
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    total = np.zeros(targets.shape)
    for rep, gamma, sign in _sides(density, domain):
        rule = local_rule(gamma, targets, dt, t, tol, hint=rep, **_rule_options(rep))
        total += sign * rule.apply(rep, rep.derivative)
    return total


def march(
    density: DensityPair,
    domain: MovingDomain,
    times,
    settings: Optional[MarchSettings] = None,
    table: Optional[SoeTable] = None,
) -> list[PotentialSnapshot]:
    """Snapshots of D[phi] at uniformly spaced times, each built from the previous one."""
    settings = settings or MarchSettings()
    times = np.atleast_1d(np.asarray(times, dtype=float))
    steps = np.diff(times)
    if times[0] <= 0:
        raise NonPositiveTime(f"first time {times[0]} must be positive")
    if steps.size and (np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0)):
        raise InvalidSpec("march needs uniformly spaced increasing times")
    table = table or generate_soe_table(settings.soe_order)
    lam, mu = settings.lam, settings.mu
    if lam is None or mu is None:
        sampled = calibrate_envelope(density, domain, float(times[0]), settings.tol)
        lam = sampled[0] if lam is None else lam
        mu = sampled[1] if mu is None else mu

    snapshots: list[PotentialSnapshot] = []
    for k, t in enumerate(times):
        t = float(t)
        mesh = build_adaptive_mesh(
            domain, t, settings.order, settings.tol, lam, mu, settings.truncation_radius, settings.cramer_c
        )
        nodes = mesh.nodes
        if not snapshots:
            values = dlhp_values(density, domain, nodes.ravel(), t, settings.tol).reshape(nodes.shape)
        else:
            dt = t - snapshots[-1].t
            values = history_advance(snapshots[-1], mesh, dt, table)
            values += local_advance(density, domain, nodes.ravel(), t, dt, settings.tol).reshape(nodes.shape)
        snapshot = PotentialSnapshot(t=t, mesh=mesh, values=PiecewiseChebFunction.from_node_values(mesh.edges, values))
        snapshots.append(snapshot)
        if settings.verbose:
            print(
                f"{BLUE}[march]{RESET} step {k + 1}/{times.size} t={t:.4g} "
                f"{YELLOW}intervals={mesh.n_intervals}{RESET} {GREEN}max|D|={np.max(np.abs(values)):.3e}{RESET}",
                flush=True,
            )
    return snapshots


def snapshot_frame(snapshots: list[PotentialSnapshot]) -> pd.DataFrame:
    """Long table (t, node, value) of every snapshot at its interpolation nodes."""
    frames = []
    for snapshot in snapshots:
        nodes = snapshot.mesh.nodes.ravel()
        frames.append(pd.DataFrame({"t": snapshot.t, "node": nodes, "value": snapshot.values(nodes)}))
    return pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=["t", "node", "value"])


def _density_jumps(rep: DensityRepresentation) -> tuple[np.ndarray, np.ndarray]:
    """Joints of the representation and phi(s+) - phi(s-) across them."""
    if not rep.panels:
        return np.array([]), np.array([])
    times = [rep.tC] + [panel.hi for panel in rep.panels[:-1]]
    right = [rep.panels[0](rep.tC)] + [panel(panel.lo) for panel in rep.panels[1:]]
    left = [rep.constant_value] + [panel(panel.hi) for panel in rep.panels[:-1]]
    return np.array(times), np.array(right, dtype=float) - np.array(left, dtype=float)


def _layer_gradient(
    rep: DensityRepresentation, gamma: Trajectory, x: float, t: float, tol: float, side: float
) -> float:
    """d/dx I[gamma, phi](x, t); for x on gamma(t) the limit from the ``side`` (+1 right, -1 left) of gamma.

    Integration by parts turns the hypersingular kernel into a single layer of phi',
    a double layer of gamma' phi and endpoint terms.
    """
    value = -float(heat_kernel(x - float(gamma(0.0)), t)) * rep.constant_value
    times, jumps = _density_jumps(rep)
    mask = times < t
    if np.any(mask):
        value -= float(np.sum(heat_kernel(x - np.asarray(gamma(times[mask])), t - times[mask]) * jumps[mask]))

    options = _rule_options(rep)
    single = local_rule(gamma, [x], t, t, tol, layer=LayerKind.SINGLE, hint=rep.derivative, **options)
    value -= float(single.apply(rep.derivative, lambda s: rep.derivative(s, order=2))[0])

    def drift(s):
        return gamma.derivative(s) * rep(s)

    def drift_slope(s):
        return gamma.second_derivative(s) * rep(s) + gamma.derivative(s) * rep.derivative(s)

    double = local_rule(gamma, [x], t, t, tol, hint=drift, **options)
    value -= float(double.apply(drift, drift_slope)[0])
    if abs(x - float(gamma(t))) <= _ON_BOUNDARY * max(1.0, abs(x)):
        value -= side * 0.5 * float(drift(t))
    return value


def _initial_gradient(f: PiecewiseChebFunction, x: float, t: float, table: SoeTable) -> float:
    """d/dx J[f](x, t) = J[f'] plus the end and jump terms of f."""
    lo, hi = f.domain
    value = float(heat_convolve(table, f.derivative(), [x], t)[0])
    value += float(heat_kernel(x - lo, t) * f(lo) - heat_kernel(x - hi, t) * f(hi))
    points, jumps = f.jumps()
    if points.size:
        value += float(np.sum(heat_kernel(x - points, t) * jumps))
    return value


def boundary_flux(
    density: DensityPair,
    domain: MovingDomain,
    f: Optional[PiecewiseChebFunction],
    t: float,
    tol: float = TOL,
    table: Optional[SoeTable] = None,
    side: str = "b",
) -> float:
    """u_x on boundary ``side`` at time t, from inside the domain, for u = J[f] + D[phi]."""
    if not t > 0:
        raise NonPositiveTime(f"t={t} must be positive")
    x = float(domain.boundary(side)(t))
    inside = -1.0 if side == "b" else 1.0
    value = 0.0
    if f is not None:
        value += _initial_gradient(f, x, t, table or generate_soe_table(12))
    for rep, gamma, sign in _sides(density, domain):
        value += sign * _layer_gradient(rep, gamma, x, t, tol, inside)
    return value
