from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.exceptions import InvalidSpec

_RATIO_SLACK = 1e-9


class AdaptiveMesh(BaseModel):
    """Spatial intervals carrying a potential snapshot at time t.

    Intervals next to the boundary hull have width ``near_spacing``; away from it they
    widen, each at most twice its neighbour.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: float
    edges: np.ndarray
    order: int
    near_spacing: float
    alpha: float

    @field_validator("edges", mode="before")
    @classmethod
    def _as_float_array(cls, value):
        return np.atleast_1d(np.asarray(value, dtype=float))

    @model_validator(mode="after")
    def _check_edges(self) -> AdaptiveMesh:
        widths = np.diff(self.edges)
        if widths.size == 0 or np.any(widths <= 0):
            raise InvalidSpec("mesh edges must increase strictly")
        ratios = widths[1:] / widths[:-1]
        if np.any(ratios > 2.0 + _RATIO_SLACK) or np.any(ratios < 0.5 - _RATIO_SLACK):
            raise InvalidSpec("adjacent mesh intervals differ by more than a factor 2")
        return self

    @property
    def support(self) -> tuple[float, float]:
        return float(self.edges[0]), float(self.edges[-1])

    @property
    def n_intervals(self) -> int:
        return self.edges.size - 1

    @property
    def orders(self) -> np.ndarray:
        return np.full(self.n_intervals, self.order)

    @property
    def nodes(self) -> np.ndarray:
        """First-kind interpolation nodes of every interval, shape (intervals, order + 1)."""
        return PiecewiseChebFunction.interpolation_nodes(self.edges, self.order)
