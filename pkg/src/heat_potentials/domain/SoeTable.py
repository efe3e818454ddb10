from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from heat_potentials.exceptions import InvalidSpec


class SoeTable(BaseModel):
    """exp(-r^2) ~ sum_k w_k exp(-2 t_k r) with r = |x| / (2 sqrt(t)).

    Conjugate pairs come first, positive-imaginary member leading; real (self-conjugate)
    nodes, if any, come last.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    order: int
    weights: np.ndarray
    nodes: np.ndarray
    achieved_error: float

    @field_validator("weights", "nodes", mode="before")
    @classmethod
    def _as_complex(cls, value):
        return np.asarray(value, dtype=complex)

    @model_validator(mode="after")
    def _check_pairs(self) -> SoeTable:
        if self.weights.shape != (self.order,) or self.nodes.shape != (self.order,):
            raise InvalidSpec(f"expected {self.order} weights and nodes")
        if np.any(self.nodes.real <= 0):
            raise InvalidSpec("every node needs a positive real part")
        k = 0
        while k < self.order:
            node, weight = self.nodes[k], self.weights[k]
            if node.imag == 0:
                if weight.imag != 0:
                    raise InvalidSpec(f"real node {k} carries a complex weight")
                k += 1
                continue
            if node.imag < 0 or k + 1 >= self.order:
                raise InvalidSpec(f"pair at {k} is not in canonical order")
            if self.nodes[k + 1] != np.conj(node) or self.weights[k + 1] != np.conj(weight):
                raise InvalidSpec(f"entries {k} and {k + 1} are not a conjugate pair")
            k += 2
        return self

    @property
    def representatives(self) -> np.ndarray:
        """Indices of one member per conjugate pair followed by the real nodes."""
        return np.flatnonzero(self.nodes.imag >= 0)

    @property
    def multiplicity(self) -> np.ndarray:
        """Factor applied to the real part of each representative: 2 for a pair, 1 for a real node."""
        return np.where(self.nodes[self.representatives].imag > 0, 2.0, 1.0)
