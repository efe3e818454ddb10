from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from heat_potentials.exceptions import InvalidSpec


class GradedMesh(BaseModel):
    """Accepted quadrature panels of a graded window, with their nodes and weights in tau.

    ``panel_edges`` tile [lo, hi] exactly; each panel carries ``order`` Gauss-Legendre
    nodes of the mapped variable (log tau, log(b - tau) or tau itself).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    lo: float
    hi: float
    panel_edges: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    @field_validator("panel_edges", "nodes", "weights", mode="before")
    @classmethod
    def _as_float_array(cls, value):
        return np.atleast_1d(np.asarray(value, dtype=float))

    @model_validator(mode="after")
    def _check_tiling(self) -> GradedMesh:
        if self.nodes.shape != self.weights.shape:
            raise InvalidSpec("nodes and weights differ in shape")
        if self.panel_edges.size == 0:
            return self
        if np.any(np.diff(self.panel_edges) <= 0):
            raise InvalidSpec("panel edges must increase")
        scale = max(1.0, abs(self.hi))
        if abs(self.panel_edges[0] - self.lo) > 1e-12 * scale or abs(self.panel_edges[-1] - self.hi) > 1e-12 * scale:
            raise InvalidSpec("panels do not tile the window")
        return self

    @property
    def n_panels(self) -> int:
        return max(self.panel_edges.size - 1, 0)
