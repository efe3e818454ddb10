from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.exceptions import PanelPlanGap


class PanelPlan(BaseModel):
    """Panel edges tiling (tC, T]: log-uniform on (tC, t0], uniform after."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    tC: float
    t0: float
    horizon: float
    exp_edges: np.ndarray
    normal_edges: np.ndarray

    @field_validator("exp_edges", "normal_edges", mode="before")
    @classmethod
    def _as_float_array(cls, value):
        return np.atleast_1d(np.asarray(value, dtype=float))

    @model_validator(mode="after")
    def _check_tiling(self) -> PanelPlan:
        edges = self.edges
        if self.exp_edges.size < 2 or abs(self.exp_edges[0] - self.tC) > 1e-15:
            raise PanelPlanGap(f"exponential panels must start at tC={self.tC}")
        if np.any(np.diff(edges) <= 0):
            raise PanelPlanGap("panel edges must increase strictly")
        if abs(edges[-1] - self.horizon) > 1e-12 * max(1.0, self.horizon):
            raise PanelPlanGap(f"panels end at {edges[-1]}, horizon is {self.horizon}")
        if self.normal_edges.size and abs(self.normal_edges[0] - self.exp_edges[-1]) > 1e-15:
            raise PanelPlanGap("normal panels must start where the exponential ones end")
        return self

    @classmethod
    def uniform(cls, tC: float, t0: float, horizon: float, n_exp: int, n_normal: int) -> PanelPlan:
        exp_end = min(t0, horizon)
        exp_edges = np.exp(np.linspace(np.log(tC), np.log(exp_end), n_exp + 1))
        exp_edges[0], exp_edges[-1] = tC, exp_end
        normal_edges = np.linspace(t0, horizon, n_normal + 1) if horizon > t0 and n_normal > 0 else np.array([])
        return cls(tC=tC, t0=t0, horizon=horizon, exp_edges=exp_edges, normal_edges=normal_edges)

    @classmethod
    def with_normal_edges(cls, tC: float, t0: float, n_exp: int, normal_edges) -> PanelPlan:
        normal_edges = np.asarray(normal_edges, dtype=float)
        exp_edges = np.exp(np.linspace(np.log(tC), np.log(t0), n_exp + 1))
        exp_edges[0], exp_edges[-1] = tC, t0
        return cls(tC=tC, t0=t0, horizon=float(normal_edges[-1]), exp_edges=exp_edges, normal_edges=normal_edges)

    @property
    def edges(self) -> np.ndarray:
        return np.concatenate([self.exp_edges, self.normal_edges[1:]]) if self.normal_edges.size else self.exp_edges

    @property
    def panels(self) -> list[tuple[DensityZone, float, float]]:
        out = [(DensityZone.EXPONENTIAL, lo, hi) for lo, hi in zip(self.exp_edges[:-1], self.exp_edges[1:])]
        if self.normal_edges.size:
            out += [(DensityZone.NORMAL, lo, hi) for lo, hi in zip(self.normal_edges[:-1], self.normal_edges[1:])]
        return [(zone, float(lo), float(hi)) for zone, lo, hi in out]
