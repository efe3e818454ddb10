from __future__ import annotations

from pydantic import BaseModel, ConfigDict

from heat_potentials.domain.DensityRepresentation import DensityRepresentation


class DensityPair(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: DensityRepresentation
    b: DensityRepresentation

    def side(self, name: str) -> DensityRepresentation:
        return self.a if name == "a" else self.b

    @property
    def horizon(self) -> float:
        return self.a.horizon
