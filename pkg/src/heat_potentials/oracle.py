"""Slow reference integrators used to check the fast paths.

Plain adaptive Gauss-Legendre with bisection; no SOE tables and no graded-mesh code.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from heat_potentials.domain.LayerKind import LayerKind
from heat_potentials.domain.LocalIntegralSpec import LocalIntegralSpec
from heat_potentials.domain.OracleConfig import OracleConfig
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.exceptions import DepthExceeded, NonPositiveTime

_GEOMETRIC_LEVELS = 80


def adaptive_integral(func: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, cfg: OracleConfig) -> float:
    """Bisect until a panel's Gauss-Legendre value matches the sum over its two halves."""
    if hi <= lo:
        return 0.0
    x, w = np.polynomial.legendre.leggauss(cfg.order)

    def gauss(left, right):
        half = 0.5 * (right - left)
        return half * float(np.dot(w, func(left + half * (x + 1.0))))

    total = 0.0
    stack = [(lo, hi, gauss(lo, hi), 0)]
    while stack:
        left, right, whole, depth = stack.pop()
        mid = 0.5 * (left + right)
        first, second = gauss(left, mid), gauss(mid, right)
        if abs(first + second - whole) <= cfg.tol * max(right - left, 1e-300) / max(hi - lo, 1e-300) or (
            abs(first + second - whole) <= 1e-15 * abs(first + second)
        ):
            total += first + second
            continue
        if depth >= cfg.max_depth:
            raise DepthExceeded(f"no convergence on [{left:.6g}, {right:.6g}] after {depth} bisections")
        stack += [(left, mid, first, depth + 1), (mid, right, second, depth + 1)]
    return total


def oracle_gauss_conv(f: PiecewiseChebFunction, x: float, t: float, cfg: OracleConfig | None = None) -> float:
    """int_a^b K(x - y, t) f(y) dy, split at the breakpoints of f and at y = x."""
    if t <= 0:
        raise NonPositiveTime(f"t={t} must be positive")
    cfg = cfg or OracleConfig()
    cuts = list(f.breakpoints) + [p for p in (x, *cfg.split_points) if f.domain[0] < p < f.domain[1]]
    width = 2.0 * np.sqrt(t)
    # unit-scale pieces around the peak keep bisection shallow for tiny t
    cuts += [x + k * width for k in range(-16, 17) if f.domain[0] < x + k * width < f.domain[1]]
    cuts = np.unique(cuts)
    total = 0.0
    for j, (lo, hi) in enumerate(zip(cuts[:-1], cuts[1:])):
        piece = int(f.piece_index(0.5 * (lo + hi)))

        def integrand(y, piece=piece):
            return np.exp(-((x - y) ** 2) / (4.0 * t)) / np.sqrt(4.0 * np.pi * t) * f.evaluate_piece(piece, y)

        total += adaptive_integral(integrand, float(lo), float(hi), cfg)
    return total


def oracle_history_integral(spec: LocalIntegralSpec, cfg: OracleConfig | None = None) -> float:
    """int_0^a H(y - gamma(b - tau), tau) phi(b - tau) dtau with geometric refinement at both ends."""
    cfg = cfg or OracleConfig()
    a, b = spec.a, spec.b
    cuts = [a * 0.5**k for k in range(_GEOMETRIC_LEVELS)] + [0.0]
    if a >= b * (1 - 1e-14):
        cuts += [b - b * 0.5**k for k in range(1, _GEOMETRIC_LEVELS)]
    cuts += [b - s for s in (*spec.joints, spec.tC, *cfg.split_points) if 0 < b - s < a]
    cuts = np.unique(np.clip(cuts, 0.0, a))

    if spec.layer == LayerKind.DOUBLE:

        def kernel(offset, tau):
            return offset * np.exp(-(offset**2) / (4.0 * tau)) / (4.0 * np.sqrt(np.pi) * tau**1.5)

    else:

        def kernel(offset, tau):
            return np.exp(-(offset**2) / (4.0 * tau)) / np.sqrt(4.0 * np.pi * tau)

    def integrand(tau):
        s = np.maximum(b - tau, 0.0)
        return kernel(spec.y - np.asarray(spec.gamma(s), dtype=float), tau) * np.asarray(spec.phi(s), dtype=float)

    return float(sum(adaptive_integral(integrand, float(lo), float(hi), cfg) for lo, hi in zip(cuts[:-1], cuts[1:])))
