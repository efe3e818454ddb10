from __future__ import annotations

from pydantic import BaseModel, ConfigDict

from heat_potentials.domain.AdaptiveMesh import AdaptiveMesh
from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction


class PotentialSnapshot(BaseModel):
    """z -> D[phi](z, t) on the mesh support; zero outside it."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: float
    mesh: AdaptiveMesh
    values: PiecewiseChebFunction
