from __future__ import annotations

from typing import Callable, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from heat_potentials.domain.MovingDomain import MovingDomain
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.ProblemVariant import ProblemVariant
from heat_potentials.domain.StefanFlux import StefanFlux
from heat_potentials.exceptions import InvalidSpec


class HeatProblem(BaseModel):
    """One heat problem; which fields are needed depends on ``variant``.

    Stefan problems run on (0, s(t)) in shifted time: the front starts at ``s0`` and
    the wall temperature is ``flux(t)``, the melting temperature is 0.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    variant: ProblemVariant
    f: Optional[PiecewiseChebFunction] = None
    horizon: float = 1.0
    forcing: Optional[Callable] = None
    domain: Optional[MovingDomain] = None
    g_a: Optional[Callable] = None
    g_b: Optional[Callable] = None
    u0: Optional[float] = None
    beta: Optional[float] = None
    s0: Optional[float] = None
    flux: Optional[Callable] = None
    flux_kind: StefanFlux = StefanFlux.CLASSICAL
    exact: Optional[Callable] = None

    @model_validator(mode="after")
    def _check_variant(self) -> HeatProblem:
        if not self.horizon > 0:
            raise InvalidSpec(f"horizon {self.horizon} must be positive")
        if self.f is None:
            raise InvalidSpec("initial data f is required")
        required = {
            ProblemVariant.PERIODIC_FORCED: ("forcing",),
            ProblemVariant.DIRICHLET_MOVING: ("domain", "g_a", "g_b"),
            ProblemVariant.STEFAN: ("u0", "beta", "s0", "flux"),
        }[self.variant]
        missing = [name for name in required if getattr(self, name) is None]
        if missing:
            raise InvalidSpec(f"{self.variant} problem is missing {', '.join(missing)}")
        if self.variant == ProblemVariant.STEFAN:
            if not self.s0 > 0 or self.beta < 0:
                raise InvalidSpec(f"need s0 > 0 and beta >= 0, got s0={self.s0}, beta={self.beta}")
            lo, hi = self.f.domain
            if abs(lo) > 1e-14 or abs(hi - self.s0) > 1e-12 * max(1.0, self.s0):
                raise InvalidSpec(f"initial data must live on [0, s0], got [{lo}, {hi}]")
        if self.variant == ProblemVariant.DIRICHLET_MOVING:
            lo, hi = self.f.domain
            a0, b0 = self.domain.ends(0.0)
            if lo < a0 - 1e-12 or hi > b0 + 1e-12:
                raise InvalidSpec(f"initial data on [{lo}, {hi}] leaves the initial domain [{a0}, {b0}]")
        return self
