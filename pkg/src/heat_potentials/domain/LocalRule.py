from __future__ import annotations

from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from heat_potentials.domain.GradedMesh import GradedMesh


class LocalRule(BaseModel):
    """Reusable discretization of I_{a,b}[gamma, .](y_i) for a batch of targets.

    value_i = head_value_i * phi(b) + head_slope_i * phi'(b) + sum_m weights[i, m] * phi(s_nodes[m])
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    targets: np.ndarray
    a: float
    b: float
    eps: float
    head_value: np.ndarray
    head_slope: np.ndarray
    s_nodes: np.ndarray
    weights: np.ndarray
    mesh: GradedMesh
    with_head: bool = True

    @field_validator("targets", "head_value", "head_slope", "s_nodes", mode="before")
    @classmethod
    def _as_float_array(cls, value):
        return np.atleast_1d(np.asarray(value, dtype=float))

    def apply(self, phi: Callable, phi_slope: Callable | None = None) -> np.ndarray:
        total = self.weights @ np.asarray(phi(self.s_nodes), dtype=float) if self.s_nodes.size else 0.0
        if self.with_head:
            total = total + self.head_value * float(phi(self.b))
        if self.with_head and phi_slope is not None:
            total = total + self.head_slope * float(phi_slope(self.b))
        return np.broadcast_to(total, self.targets.shape).copy()

    def apply_basis(self, node_values: np.ndarray, value_at_b: np.ndarray, slope_at_b: np.ndarray) -> np.ndarray:
        """Rule applied to J basis functions at once: ``node_values`` is (nodes, J); returns (targets, J)."""
        total = np.outer(self.head_value, value_at_b) + np.outer(self.head_slope, slope_at_b)
        if self.s_nodes.size:
            total = total + self.weights @ node_values
        return total
