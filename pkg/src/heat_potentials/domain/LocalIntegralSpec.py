from __future__ import annotations

from typing import Callable, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from configuration import T0, TC
from heat_potentials.domain.LayerKind import LayerKind
from heat_potentials.domain.Trajectory import Trajectory
from heat_potentials.exceptions import InvalidSpec


class LocalIntegralSpec(BaseModel):
    """I_{a,b}[gamma, phi](y) = int_0^a H(y - gamma(b - tau), tau) phi(b - tau) dtau.

    ``phi_slope`` is phi'(t); it feeds the O(eps) term of the asymptotic head. ``joints``
    are the times where phi may jump or kink; graded windows are split there.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    y: float
    gamma: Trajectory
    phi: Callable
    phi_slope: Optional[Callable] = None
    a: float
    b: float
    eps: float
    t0: float = T0
    tC: float = TC
    joints: tuple[float, ...] = ()
    layer: LayerKind = LayerKind.DOUBLE

    @model_validator(mode="after")
    def _check_limits(self) -> LocalIntegralSpec:
        values = (self.y, self.a, self.b, self.eps, self.t0, self.tC)
        if not all(np.isfinite(values)):
            raise InvalidSpec(f"non-finite input in {values}")
        if not 0 < self.eps < self.a <= self.b * (1 + 1e-14):
            raise InvalidSpec(f"need 0 < eps < a <= b, got eps={self.eps}, a={self.a}, b={self.b}")
        if not 0 <= self.tC < self.t0:
            raise InvalidSpec(f"need tC < t0, got tC={self.tC}, t0={self.t0}")
        return self

    def slope_at(self, t: float) -> float:
        return float(self.phi_slope(t)) if self.phi_slope is not None else 0.0
