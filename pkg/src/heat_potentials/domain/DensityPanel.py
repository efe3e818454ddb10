from __future__ import annotations

import numpy as np
from numpy.polynomial import chebyshev
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.exceptions import DegeneratePiece


class DensityPanel(BaseModel):
    """Chebyshev series on (lo, hi], in t for normal panels and in log t for exponential ones."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    zone: DensityZone
    lo: float
    hi: float
    coeffs: np.ndarray

    @field_validator("coeffs", mode="before")
    @classmethod
    def _as_float_array(cls, value):
        return np.atleast_1d(np.asarray(value, dtype=float))

    @model_validator(mode="after")
    def _check_edges(self) -> DensityPanel:
        if not self.hi > self.lo:
            raise DegeneratePiece(f"panel ({self.lo}, {self.hi}] is empty")
        if self.zone == DensityZone.EXPONENTIAL and self.lo <= 0:
            raise DegeneratePiece("exponential panels need lo > 0")
        return self

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def local_coordinate(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.zone == DensityZone.EXPONENTIAL:
            lo, hi = np.log(self.lo), np.log(self.hi)
            return 2.0 * (np.log(t) - lo) / (hi - lo) - 1.0
        return 2.0 * (t - self.lo) / (self.hi - self.lo) - 1.0

    def coordinate_rate(self, t) -> np.ndarray:
        """dx/dt of the local coordinate."""
        t = np.asarray(t, dtype=float)
        if self.zone == DensityZone.EXPONENTIAL:
            return 2.0 / (np.log(self.hi) - np.log(self.lo)) / t
        return np.full(t.shape, 2.0 / (self.hi - self.lo))

    def __call__(self, t):
        return chebyshev.chebval(self.local_coordinate(t), self.coeffs)

    def derivative(self, t, order: int = 1):
        t = np.asarray(t, dtype=float)
        x = self.local_coordinate(t)
        rate = self.coordinate_rate(t)
        d1 = chebyshev.chebval(x, chebyshev.chebder(self.coeffs)) if self.order >= 1 else np.zeros_like(x)
        if order == 1:
            return d1 * rate
        d2 = chebyshev.chebval(x, chebyshev.chebder(self.coeffs, 2)) if self.order >= 2 else np.zeros_like(x)
        if self.zone == DensityZone.EXPONENTIAL:
            # x' = c / t, x'' = -c / t^2
            return d2 * rate**2 - d1 * rate / t
        return d2 * rate**2
