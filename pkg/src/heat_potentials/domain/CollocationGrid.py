from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.exceptions import InvalidSpec


def second_kind_points(order: int) -> np.ndarray:
    """(1 - cos(pi l / L)) / 2 for l = 0..L, ascending on [0, 1]."""
    return 0.5 * (1.0 - np.cos(np.pi * np.arange(order + 1) / order))


class CollocationGrid(BaseModel):
    """Collocation points t_kl of one panel; L + 1 points for M + 1 unknowns per boundary."""

    model_config = ConfigDict(frozen=True)

    zone: DensityZone
    lo: float
    hi: float
    L: int
    M: int

    @model_validator(mode="after")
    def _check_orders(self) -> CollocationGrid:
        if self.L < self.M or self.M < 1:
            raise InvalidSpec(f"need L >= M >= 1, got L={self.L}, M={self.M}")
        return self

    @property
    def points(self) -> np.ndarray:
        s = second_kind_points(self.L)
        if self.zone == DensityZone.EXPONENTIAL:
            lo, hi = np.log(self.lo), np.log(self.hi)
            points = np.exp(lo + (hi - lo) * s)
        else:
            points = self.lo + (self.hi - self.lo) * s
        points[0], points[-1] = self.lo, self.hi
        return points
