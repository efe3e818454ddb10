from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from heat_potentials.domain.DensityPanel import DensityPanel
from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.exceptions import OutOfRange, PanelPlanGap


class DensityRepresentation(BaseModel):
    """Three-zone density on one boundary.

    (0, tC] holds ``constant_value``; the panels tile (tC, horizon] in order with
    left-open, right-closed pieces, so a joint is evaluated with the panel on its left.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    tC: float
    t0: float
    constant_value: float
    panels: tuple[DensityPanel, ...] = ()

    @model_validator(mode="after")
    def _check_tiling(self) -> DensityRepresentation:
        if not 0 < self.tC < self.t0:
            raise PanelPlanGap(f"need 0 < tC < t0, got tC={self.tC}, t0={self.t0}")
        edge = self.tC
        for panel in self.panels:
            if abs(panel.lo - edge) > 1e-13 * max(1.0, edge):
                raise PanelPlanGap(f"panel starts at {panel.lo}, expected {edge}")
            edge = panel.hi
        return self

    @property
    def horizon(self) -> float:
        return self.panels[-1].hi if self.panels else self.tC

    @property
    def joints(self) -> np.ndarray:
        """Every time where the representation may jump: tC and all panel edges."""
        return np.array([self.tC] + [p.hi for p in self.panels])

    def extend(self, panel: DensityPanel) -> DensityRepresentation:
        return self.model_copy(update={"panels": self.panels + (panel,)})

    def truncate(self, n_panels: int) -> DensityRepresentation:
        return self.model_copy(update={"panels": self.panels[:n_panels]})

    def _locate(self, t: np.ndarray) -> np.ndarray:
        # -1 marks the constant zone
        return np.searchsorted(self.joints, t, side="left") - 1

    def _evaluate(self, t, method: str, **kwargs) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        # quadrature nodes may land a rounding error past the horizon
        slack = 1e-12 * max(1.0, self.horizon)
        if np.any(t < 0) or np.any(t > self.horizon + slack):
            raise OutOfRange(f"t in [{t.min():.6g}, {t.max():.6g}] leaves (0, {self.horizon:.6g}]")
        out = np.zeros_like(t)
        idx = np.minimum(self._locate(t), len(self.panels) - 1)
        if method == "value":
            out[idx < 0] = self.constant_value
        for j in np.unique(idx[idx >= 0]):
            mask = idx == j
            panel = self.panels[j]
            out[mask] = panel(t[mask]) if method == "value" else panel.derivative(t[mask], **kwargs)
        return out[0] if scalar else out

    def __call__(self, t):
        return self._evaluate(t, "value")

    def derivative(self, t, order: int = 1):
        return self._evaluate(t, "derivative", order=order)

    def zone_of(self, t: float) -> DensityZone:
        if t <= self.tC:
            return DensityZone.CONSTANT
        return self.panels[int(self._locate(np.array([t]))[0])].zone
