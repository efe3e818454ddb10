from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction

_CURVATURE_STEP = 1e-5


class Trajectory(BaseModel):
    """A boundary curve gamma(t) with its first two time derivatives."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    value: Callable
    slope: Callable
    curvature: Optional[Callable] = None
    label: str = ""

    @classmethod
    def constant(cls, position: float) -> Trajectory:
        return cls(
            value=lambda t: np.full(np.shape(t), float(position)) if np.ndim(t) else float(position),
            slope=lambda t: np.zeros(np.shape(t)) if np.ndim(t) else 0.0,
            curvature=lambda t: np.zeros(np.shape(t)) if np.ndim(t) else 0.0,
            label=f"{position:g}",
        )

    @classmethod
    def from_cheb(cls, curve: PiecewiseChebFunction, label: str = "") -> Trajectory:
        """Trajectory sampled from a piecewise Chebyshev curve in time; joints use the piece on the left."""
        slope = curve.derivative()
        curvature = slope.derivative()
        return cls(
            value=lambda t: curve(t, side="left", extrapolate=True),
            slope=lambda t: slope(t, side="left", extrapolate=True),
            curvature=lambda t: curvature(t, side="left", extrapolate=True),
            label=label,
        )

    def __call__(self, t):
        return self.value(t)

    def derivative(self, t):
        return self.slope(t)

    def second_derivative(self, t):
        if self.curvature is not None:
            return self.curvature(t)
        t = np.asarray(t, dtype=float)
        h = _CURVATURE_STEP * np.maximum(1.0, np.abs(t))
        return (self.slope(t + h) - self.slope(np.maximum(t - h, 0.0))) / (t + h - np.maximum(t - h, 0.0))
