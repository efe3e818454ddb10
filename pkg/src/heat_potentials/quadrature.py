"""Time quadrature for heat layer potentials.

I_{a,b}[gamma, phi](y) = int_0^a H(y - gamma(b - tau), tau) phi(b - tau) dtau is split at
tau = eps into an asymptotic head, evaluated in closed form from phi(b) and phi'(b),
and a tail on an exponentially graded mesh. The tail is graded in log(tau) near the
kernel singularity and in log(b - tau) near t = 0, where the density is singular; the
part reaching into the constant zone (b - tau < tC) uses plain Gauss-Legendre.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy import special

from configuration import CHECK_ORDER, GRADED_ORDER, SINGLE_MESH_THRESHOLD, T0, TC
from heat_potentials.domain.GradedMesh import GradedMesh
from heat_potentials.domain.LayerKind import LayerKind
from heat_potentials.domain.LocalIntegralSpec import LocalIntegralSpec
from heat_potentials.domain.LocalRule import LocalRule
from heat_potentials.domain.Trajectory import Trajectory
from heat_potentials.exceptions import AccuracyNotMet, InvalidSpec, RegionMismatch

SQRT_PI = np.sqrt(np.pi)
DEGENERATE_OFFSET = 1e-12
DEGENERATE_SLOPE = 1e-12
SMALL_DRIFT = 1e-3
TAIL_FLOOR = 1e-14
MAX_DEPTH = 40


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def default_eps(a: float, tol: float) -> float:
    """min(1e-4, a / 10), shrunk until eps^{3/2} <= tol / 10."""
    return float(min(1e-4, a / 10.0, (tol / 10.0) ** (2.0 / 3.0)))


def split_point(a: float, b: float, eps: float, t0: float = T0) -> float:
    """Where a dual mesh hands over from log(tau) grading to log(b - tau) grading."""
    return float(min(max(b - t0, 0.5 * (a + eps)), a))


def heat_kernel(y, tau):
    """K(y, tau) = exp(-y^2 / 4 tau) / sqrt(4 pi tau)."""
    return np.exp(-(y**2) / (4.0 * tau)) / np.sqrt(4.0 * np.pi * tau)


def double_layer_kernel(y, tau):
    """H(y, tau) = -dK/dy = y exp(-y^2 / 4 tau) / (4 sqrt(pi) tau^{3/2})."""
    return y * np.exp(-(y**2) / (4.0 * tau)) / (4.0 * SQRT_PI * tau**1.5)


def layer_kernel(layer: LayerKind) -> Callable:
    return double_layer_kernel if layer == LayerKind.DOUBLE else heat_kernel


def head_moments(p, slope, eps):
    """e^{-p slope / 2} times int_0^eps tau^{k} exp(-p^2 / 4 tau - slope^2 tau / 4) dtau for k = -3/2, -1/2, 1/2.

    Returns (p * A, B, C) for k = -3/2, -1/2, 1/2; p * A is the principal value 0 at p = 0.
    """
    p, slope, eps = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (p, slope, eps)))
    q = 0.25 * slope
    alpha = 0.5 * np.abs(p)
    beta = 2.0 * np.abs(q)
    root = np.sqrt(eps)
    pA, B, C = np.zeros(p.shape), np.zeros(p.shape), np.zeros(p.shape)

    small = (beta * root < SMALL_DRIFT) | (np.abs(slope) < DEGENERATE_SLOPE)
    generic = ~small
    if np.any(generic):
        a, bt, r, pp, qq = alpha[generic], beta[generic], root[generic], p[generic], q[generic]
        gauss = np.exp(-((pp / (2.0 * r) + 2.0 * qq * r) ** 2))
        x = a / r + bt * r
        y = a / r - bt * r
        e_plus = special.erfcx(x) * gauss
        e_minus = np.where(
            y >= 0, special.erfcx(np.abs(y)) * gauss, np.exp(-2.0 * pp * qq - 2.0 * a * bt) * special.erfc(y)
        )
        pA[generic] = np.sign(pp) * SQRT_PI * (e_plus + e_minus)
        B[generic] = SQRT_PI / (2.0 * bt) * (e_minus - e_plus)
        a2A = 0.5 * a * SQRT_PI * (e_plus + e_minus)
        C[generic] = (0.5 * B[generic] + a2A - r * gauss) / bt**2
    if np.any(small):
        # first order in beta^2 around the drift-free closed forms
        a, bt, r, e, pp, qq = alpha[small], beta[small], root[small], eps[small], p[small], q[small]
        z = a / r
        ex = np.exp(-(z**2))
        erfc_a = special.erfc(z)
        pA0 = 2.0 * np.sign(pp) * SQRT_PI * erfc_a
        B0 = 2.0 * ex * (r - a * SQRT_PI * special.erfcx(z))
        C0 = (2.0 / 3.0) * (e**1.5 * ex - a**2 * B0)
        M0 = 0.4 * (e**2.5 * ex - a**2 * C0)
        drift = np.exp(-2.0 * pp * qq)
        pA[small] = drift * (pA0 - bt**2 * pp * B0)
        B[small] = drift * (B0 - bt**2 * C0)
        C[small] = drift * (C0 - bt**2 * M0)
    return pA, B, C


def head_coefficients(p, slope, eps, layer: LayerKind = LayerKind.DOUBLE, scale=1.0):
    """(c0, c1) with int_0^eps kernel * phi(b - tau) dtau ~ c0 phi(b) + c1 phi'(b).

    ``p`` is y - gamma(b) and ``slope`` is gamma'(b). Offsets below 1e-12 * max(1, |scale|)
    count as on-boundary and give the principal value.
    """
    p = np.asarray(p, dtype=float)
    p = np.where(np.abs(p) < DEGENERATE_OFFSET * np.maximum(1.0, np.abs(scale)), 0.0, p)
    pA, B, C = head_moments(p, slope, eps)
    if layer == LayerKind.SINGLE:
        return B / (2.0 * SQRT_PI), -C / (2.0 * SQRT_PI)
    slope = np.asarray(slope, dtype=float)
    return (pA + slope * B) / (4.0 * SQRT_PI), -(p * B + slope * C) / (4.0 * SQRT_PI)


def asymptotic_local(spec: LocalIntegralSpec) -> float:
    """Closed-form head int_0^eps H(y - gamma(b - tau), tau) phi(b - tau) dtau, O(eps^{3/2}) accurate."""
    p = spec.y - float(spec.gamma(spec.b))
    c0, c1 = head_coefficients(p, float(spec.gamma.derivative(spec.b)), spec.eps, spec.layer, scale=spec.y)
    return float(c0 * float(spec.phi(spec.b)) + c1 * spec.slope_at(spec.b))


def _segments(lo: float, hi: float, b: float, c: float, tail: float, joints) -> list[tuple[str, float, float]]:
    c = min(max(c, lo), hi)
    pieces = []
    if c > lo:
        pieces.append(("tau", lo, c))
    s_end = min(hi, b - tail)
    if s_end > c:
        pieces.append(("s", c, s_end))
    start = max(c, b - tail, lo)
    if hi > start:
        pieces.append(("plain", start, hi))

    cuts = np.sort(b - np.asarray(joints, dtype=float))
    out = []
    for kind, left, right in pieces:
        margin = 1e-13 * max(1.0, abs(right))
        inner = cuts[(cuts > left + margin) & (cuts < right - margin)]
        edges = np.concatenate(([left], inner, [right]))
        out += [(kind, float(x0), float(x1)) for x0, x1 in zip(edges[:-1], edges[1:])]
    return out


def _mapped_range(kind: str, lo: float, hi: float, b: float) -> tuple[float, float]:
    if kind == "tau":
        return np.log(lo), np.log(hi)
    if kind == "s":
        return np.log(b - hi), np.log(b - lo)
    return lo, hi


def _to_tau(kind: str, v: np.ndarray, b: float) -> tuple[np.ndarray, np.ndarray]:
    if kind == "tau":
        tau = np.exp(v)
        return tau, tau
    if kind == "s":
        s = np.exp(v)
        return b - s, s
    return v, np.ones_like(v)


def _rule(kind: str, v0: float, v1: float, b: float, order: int):
    x, w = gauss_legendre(order)
    v = 0.5 * (v0 + v1) + 0.5 * (v1 - v0) * x
    tau, jac = _to_tau(kind, v, b)
    return tau, 0.5 * (v1 - v0) * w * jac


def graded_window(
    integrand: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    b: float,
    c: float,
    tol: float,
    tC: float = TC,
    joints=(),
    order: int = GRADED_ORDER,
    check_order: int = CHECK_ORDER,
    max_depth: int = MAX_DEPTH,
) -> GradedMesh:
    """Adaptive graded mesh for int_lo^hi integrand(tau) dtau.

    ``integrand`` maps tau nodes to a (targets, nodes) array. Log(tau) panels of unit
    width cover [lo, c], log(b - tau) panels cover [c, b - tC] and plain panels cover the
    rest; a panel is bisected until its order-``order`` and order-``check_order``
    estimates agree to within its share of ``tol`` for every target. A panel still
    disagreeing after ``max_depth`` bisections raises ``AccuracyNotMet``.
    """
    if not hi > lo:
        return GradedMesh(lo=lo, hi=max(lo, hi), panel_edges=[], nodes=[], weights=[], order=order)
    tail = tC if tC > 0 else TAIL_FLOOR
    queue = []
    for kind, left, right in _segments(lo, hi, b, c, tail, joints):
        v0, v1 = _mapped_range(kind, left, right, b)
        count = 1 if kind == "plain" else max(1, int(np.ceil(v1 - v0 - 1e-9)))
        edges = np.linspace(v0, v1, count + 1)
        queue += [(kind, float(x0), float(x1), 0) for x0, x1 in zip(edges[:-1], edges[1:])]
    panel_tol = tol / max(1, len(queue))

    accepted = []
    while queue:
        kind, v0, v1, depth = queue.pop()
        tau, w = _rule(kind, v0, v1, b, order)
        coarse = np.atleast_2d(integrand(tau)) @ w
        tau_check, w_check = _rule(kind, v0, v1, b, check_order)
        fine = np.atleast_2d(integrand(tau_check)) @ w_check
        gap = float(np.max(np.abs(coarse - fine)))
        if gap <= panel_tol:
            ends = _to_tau(kind, np.array([v0, v1]), b)[0]
            accepted.append((float(ends.min()), float(ends.max()), tau, w))
            continue
        if depth >= max_depth:
            ends = _to_tau(kind, np.array([v0, v1]), b)[0]
            raise AccuracyNotMet(
                f"panel [{ends.min():.6g}, {ends.max():.6g}] still differs by {gap:.3e} after {max_depth} bisections, "
                f"above its share {panel_tol:.3e} of tol={tol:.1e}"
            )
        mid = 0.5 * (v0 + v1)
        queue += [(kind, v0, mid, depth + 1), (kind, mid, v1, depth + 1)]

    accepted.sort(key=lambda item: item[0])
    edges = np.unique([lo, hi] + [item[0] for item in accepted[1:]])
    return GradedMesh(
        lo=lo,
        hi=hi,
        panel_edges=edges,
        nodes=np.concatenate([item[2] for item in accepted]),
        weights=np.concatenate([item[3] for item in accepted]),
        order=order,
    )


def _kernel_matrix(gamma: Trajectory, targets: np.ndarray, b: float, layer: LayerKind) -> Callable:
    kernel = layer_kernel(layer)

    def evaluate(tau: np.ndarray) -> np.ndarray:
        offsets = targets[:, None] - np.asarray(gamma(b - tau), dtype=float)[None, :]
        return kernel(offsets, tau[None, :])

    return evaluate


def _with_hint(kernel: Callable, hint: Optional[Callable], b: float) -> Callable:
    if hint is None:
        return kernel
    return lambda tau: kernel(tau) * np.asarray(hint(b - tau), dtype=float)[None, :]


def _spec_window(spec: LocalIntegralSpec, c: float, tol: float, order: int, check_order: int) -> float:
    kernel = _kernel_matrix(spec.gamma, np.array([spec.y]), spec.b, spec.layer)
    integrand = _with_hint(kernel, spec.phi, spec.b)
    mesh = graded_window(integrand, spec.eps, spec.a, spec.b, c, tol, spec.tC, spec.joints, order, check_order)
    if mesh.nodes.size == 0:
        return 0.0
    return float((integrand(mesh.nodes) @ mesh.weights)[0])


def graded_single_mesh(
    spec: LocalIntegralSpec,
    tol: float,
    threshold: float = SINGLE_MESH_THRESHOLD,
    order: int = GRADED_ORDER,
    check_order: int = CHECK_ORDER,
) -> float:
    """int_eps^a H(.) phi(b - tau) dtau on log(tau) panels; for windows ending before b - threshold."""
    if spec.b - spec.a <= threshold:
        raise RegionMismatch(f"b - a = {spec.b - spec.a:.3g} needs the dual mesh")
    return _spec_window(spec, spec.a, tol, order, check_order)


def graded_dual_mesh(
    spec: LocalIntegralSpec,
    tol: float,
    threshold: float = SINGLE_MESH_THRESHOLD,
    order: int = GRADED_ORDER,
    check_order: int = CHECK_ORDER,
    c: Optional[float] = None,
) -> float:
    """int_eps^a split at c: log(tau) grading below c, log(b - tau) grading above, constant tail past b - tC."""
    if spec.b - spec.a > threshold:
        raise RegionMismatch(f"b - a = {spec.b - spec.a:.3g} needs the single mesh")
    c = split_point(spec.a, spec.b, spec.eps, spec.t0) if c is None else float(c)
    if not spec.eps <= c <= spec.a:
        raise InvalidSpec(f"split point {c} outside [{spec.eps}, {spec.a}]")
    return _spec_window(spec, c, tol, order, check_order)


def local_history_integral(spec: LocalIntegralSpec, tol: float, threshold: float = SINGLE_MESH_THRESHOLD) -> float:
    """Head plus graded tail, single or dual mesh by the b - a rule."""
    head = asymptotic_local(spec)
    if spec.b - spec.a > threshold:
        return head + graded_single_mesh(spec, tol, threshold)
    return head + graded_dual_mesh(spec, tol, threshold)


def local_rule(
    gamma: Trajectory,
    targets,
    a: float,
    b: float,
    tol: float,
    eps: Optional[float] = None,
    t0: float = T0,
    tC: float = TC,
    joints=(),
    layer: LayerKind = LayerKind.DOUBLE,
    hint: Optional[Callable] = None,
    threshold: float = SINGLE_MESH_THRESHOLD,
    order: int = GRADED_ORDER,
    check_order: int = CHECK_ORDER,
) -> LocalRule:
    """Head coefficients and graded weights of I_{a,b}[gamma, .] at many targets.

    The mesh adapts to the kernel times ``hint`` (the density when known, 1 otherwise)
    across all targets, so the rule can be reused for any density of similar smoothness.
    """
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    eps = default_eps(a, tol) if eps is None else float(eps)
    if not 0 < eps < a <= b * (1 + 1e-14):
        raise InvalidSpec(f"need 0 < eps < a <= b, got eps={eps}, a={a}, b={b}")
    gb = float(gamma(b))
    c0, c1 = head_coefficients(targets - gb, float(gamma.derivative(b)), eps, layer, scale=targets)
    c = a if b - a > threshold else split_point(a, b, eps, t0)
    kernel = _kernel_matrix(gamma, targets, b, layer)
    mesh = graded_window(_with_hint(kernel, hint, b), eps, a, b, c, tol, tC, joints, order, check_order)
    weights = kernel(mesh.nodes) * mesh.weights[None, :] if mesh.nodes.size else np.zeros((targets.size, 0))
    return LocalRule(
        targets=targets,
        a=a,
        b=b,
        eps=eps,
        head_value=c0,
        head_slope=c1,
        s_nodes=b - mesh.nodes,
        weights=weights,
        mesh=mesh,
    )


def history_rule(
    gamma: Trajectory,
    targets,
    lag: float,
    b: float,
    tol: float,
    t0: float = T0,
    tC: float = TC,
    joints=(),
    layer: LayerKind = LayerKind.DOUBLE,
    hint: Optional[Callable] = None,
    order: int = GRADED_ORDER,
    check_order: int = CHECK_ORDER,
) -> LocalRule:
    """Weights for int_lag^b kernel * phi(b - tau) dtau, the part of the potential older than ``lag``."""
    targets = np.atleast_1d(np.asarray(targets, dtype=float))
    if not 0 < lag <= b:
        raise InvalidSpec(f"need 0 < lag <= b, got lag={lag}, b={b}")
    c = float(min(max(b - t0, 0.5 * (lag + b)), b))
    kernel = _kernel_matrix(gamma, targets, b, layer)
    mesh = graded_window(_with_hint(kernel, hint, b), lag, b, b, c, tol, tC, joints, order, check_order)
    weights = kernel(mesh.nodes) * mesh.weights[None, :] if mesh.nodes.size else np.zeros((targets.size, 0))
    zeros = np.zeros(targets.size)
    return LocalRule(
        targets=targets,
        a=b,
        b=b,
        eps=lag,
        head_value=zeros,
        head_slope=zeros,
        s_nodes=b - mesh.nodes,
        weights=weights,
        mesh=mesh,
        with_head=False,
    )
