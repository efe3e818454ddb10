from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from heat_potentials.domain.Trajectory import Trajectory
from heat_potentials.exceptions import InvalidSpec

_SAMPLES = 513


class MovingDomain(BaseModel):
    """Omega(t) = (a(t), b(t)) on [0, horizon]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    a: Trajectory
    b: Trajectory
    horizon: float

    @model_validator(mode="after")
    def _check_ordering(self) -> MovingDomain:
        if not self.horizon > 0:
            raise InvalidSpec(f"horizon {self.horizon} must be positive")
        t = np.linspace(0.0, self.horizon, _SAMPLES)
        gap = np.asarray(self.b(t)) - np.asarray(self.a(t))
        if np.any(~np.isfinite(gap)) or np.any(gap <= 0):
            raise InvalidSpec(f"a(t) < b(t) fails near t={t[np.argmin(gap)]:.6g}")
        return self

    @classmethod
    def static(cls, left: float, right: float, horizon: float) -> MovingDomain:
        return cls(a=Trajectory.constant(left), b=Trajectory.constant(right), horizon=horizon)

    def boundary(self, side: str) -> Trajectory:
        return self.a if side == "a" else self.b

    def ends(self, t: float) -> tuple[float, float]:
        return float(self.a(t)), float(self.b(t))

    def hull(self, t: float, samples: int = 257) -> tuple[float, float]:
        """Smallest interval containing the boundary over [0, t]."""
        s = np.linspace(0.0, t, samples)
        return float(np.min(self.a(s))), float(np.max(self.b(s)))
