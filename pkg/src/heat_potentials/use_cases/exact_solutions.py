"""Closed-form solutions the drivers are measured against."""

from __future__ import annotations

from typing import Callable

import numpy as np
from scipy import optimize, special

_LAMBDA_BRACKET = (1e-12, 5.0)


def periodic_solution(k: int) -> tuple[Callable, Callable]:
    """u = cos(k pi t) sin((k + 1) pi x) on the cell [-1, 1] and the forcing it needs."""
    space = (k + 1) * np.pi

    def u(x, t):
        return np.cos(k * np.pi * t) * np.sin(space * np.asarray(x, dtype=float))

    def forcing(x, t):
        amplitude = -k * np.pi * np.sin(k * np.pi * t) + space**2 * np.cos(k * np.pi * t)
        return amplitude * np.sin(space * np.asarray(x, dtype=float))

    return u, forcing


def windowed_sine_solution(k: int, left: float = -2.0, right: float = 2.0) -> Callable:
    """u(x, t) = int_left^right K(x - y, t) sin(k pi y) dy through the Faddeeva function.

    With z_y = (y - x) / 2 sqrt(t) - i k pi sqrt(t), u is the imaginary part of

        e^{i w x - w^2 t} - e^{i w B - (B - x)^2 / 4t} w(i z_B) / 2 - e^{i w A - (A - x)^2 / 4t} w(-i z_A) / 2

    and each Faddeeva argument stays in the upper half plane.
    """
    omega = k * np.pi

    def u(x, t):
        x = np.asarray(x, dtype=float)
        root = np.sqrt(t)
        z_right = (right - x) / (2.0 * root) - 1j * omega * root
        z_left = (left - x) / (2.0 * root) - 1j * omega * root
        plane = np.exp(1j * omega * x - omega**2 * t)
        upper = np.exp(1j * omega * right - (right - x) ** 2 / (4.0 * t)) * special.wofz(1j * z_right)
        lower = np.exp(1j * omega * left - (left - x) ** 2 / (4.0 * t)) * special.wofz(-1j * z_left)
        return np.imag(plane - 0.5 * upper - 0.5 * lower)

    return u


def stefan_wall_temperature(lam: float, beta: float) -> float:
    """u_0 = sqrt(pi) lam e^{lam^2} erf(lam) / beta."""
    return float(np.sqrt(np.pi) * lam * np.exp(lam**2) * special.erf(lam) / beta)


def stefan_lambda(u0: float, beta: float) -> float:
    """Root of lam e^{lam^2} erf(lam) = beta u_0 / sqrt(pi) on (0, 5)."""
    target = beta * u0 / np.sqrt(np.pi)

    def mismatch(lam):
        return lam * np.exp(lam**2) * special.erf(lam) - target

    return float(optimize.brentq(mismatch, *_LAMBDA_BRACKET, xtol=1e-15))


def stefan_reference(lam: float, beta: float, t0: float, x, t) -> tuple[np.ndarray, np.ndarray]:
    """Similarity solution started at t0: (u(x, t), s(t)) with s = 2 lam sqrt(t + t0)."""
    shifted = np.asarray(t, dtype=float) + t0
    u0 = stefan_wall_temperature(lam, beta)
    u = u0 * (1.0 - special.erf(np.asarray(x, dtype=float) / (2.0 * np.sqrt(shifted))) / special.erf(lam))
    return u, 2.0 * lam * np.sqrt(shifted)
