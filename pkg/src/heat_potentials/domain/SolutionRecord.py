from __future__ import annotations

from typing import Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, field_validator

from heat_potentials.domain.PiecewiseChebFunction import PiecewiseChebFunction
from heat_potentials.domain.PotentialSnapshot import PotentialSnapshot


class SolutionRecord(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    times: np.ndarray
    profiles: list[PiecewiseChebFunction] = Field(default_factory=list)
    front: Optional[PiecewiseChebFunction] = None
    errors: dict[str, float] = Field(default_factory=dict)
    # marched double-layer states, when the solver marched
    snapshots: list[PotentialSnapshot] = Field(default_factory=list)
    # correction residuals per front panel, one per sweep
    sweep_residuals: list[list[float]] = Field(default_factory=list)

    @field_validator("times", mode="before")
    @classmethod
    def _as_float_array(cls, value):
        return np.atleast_1d(np.asarray(value, dtype=float))

    def profile_frame(self, samples: int = 201) -> pd.DataFrame:
        """Long table (t, x, u) with ``samples`` equispaced points per profile."""
        rows = []
        for t, profile in zip(self.times, self.profiles):
            x = np.linspace(*profile.domain, samples)
            rows.append(pd.DataFrame({"t": t, "x": x, "u": profile(x)}))
        return pd.concat(rows, ignore_index=True) if rows else pd.DataFrame(columns=["t", "x", "u"])

    def front_frame(self, samples: int = 201) -> pd.DataFrame:
        if self.front is None:
            return pd.DataFrame(columns=["t", "s"])
        t = np.linspace(*self.front.domain, samples)
        return pd.DataFrame({"t": t, "s": self.front(t)})
