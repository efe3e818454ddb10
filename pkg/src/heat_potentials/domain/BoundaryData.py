from __future__ import annotations

from typing import Callable, Optional

from pydantic import BaseModel, ConfigDict, model_validator

from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.exceptions import InvalidSpec


class BoundaryData(BaseModel):
    """Right-hand side of the boundary integral equations.

    Either Dirichlet data ``g_a``, ``g_b`` with initial data ``f`` (supported on the
    initial domain), or the assembled right-hand sides ``h_a``, ``h_b`` directly.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    g_a: Optional[Callable] = None
    g_b: Optional[Callable] = None
    f: Optional[PiecewiseChebFunction] = None
    h_a: Optional[Callable] = None
    h_b: Optional[Callable] = None

    @model_validator(mode="after")
    def _check_form(self) -> BoundaryData:
        direct = self.h_a is not None and self.h_b is not None
        dirichlet = self.g_a is not None and self.g_b is not None
        if direct == dirichlet:
            raise InvalidSpec("give either (g_a, g_b[, f]) or (h_a, h_b)")
        return self

    @property
    def is_direct(self) -> bool:
        return self.h_a is not None
