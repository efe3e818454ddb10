from __future__ import annotations

from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict


class SweepState(BaseModel):
    """Accumulators of the two-directional FGT sweep on a merged grid x_0 < ... < x_G.

    Arrays are (representative nodes, grid points) for the accumulators and (nodes, G)
    for the per-interval quantities. ``g_plus`` and ``g_minus`` are only set by the
    periodic sweep.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    grid: np.ndarray
    tau: np.ndarray
    beta: np.ndarray
    moments_right: np.ndarray
    moments_left: np.ndarray
    h_plus: np.ndarray
    h_minus: np.ndarray
    g_plus: Optional[np.ndarray] = None
    g_minus: Optional[np.ndarray] = None
