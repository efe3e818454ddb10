from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from heat_potentials.domain.DensityZone import DensityZone
from heat_potentials.domain.ExperimentCommand import ExperimentCommand
from heat_potentials.domain.StefanFlux import StefanFlux
from heat_potentials.exceptions import ConfigInvalid


class ExperimentConfig(BaseModel):
    """One experiment of the command line; JSON on disk, flags override fields."""

    model_config = ConfigDict(extra="forbid")

    command: ExperimentCommand
    soe_orders: list[int] = Field(default_factory=lambda: [12])
    times: list[float] = Field(default_factory=lambda: [1.0, 1e-1, 1e-2, 1e-3, 1e-4])
    targets: int = Field(default=100_000, ge=1)
    oracle_samples: int = Field(default=200, ge=1)
    orders: list[int] = Field(default_factory=lambda: [8])
    refinements: list[int] = Field(default_factory=lambda: [4, 8, 16])
    sdc_rounds: list[int] = Field(default_factory=lambda: [4])
    # forcing or initial-data wavenumbers k, one ladder each
    wavenumbers: list[int] = Field(default_factory=lambda: [6])
    zone: DensityZone = DensityZone.NORMAL
    flux: StefanFlux = StefanFlux.CLASSICAL
    tol: float = Field(default=1e-10, gt=0)
    # time horizon of the solver runs; each command has its own default
    horizon: Optional[float] = Field(default=None, gt=0)
    repeats: int = Field(default=1, ge=1)
    seed: int = 0
    out: Optional[str] = None
    # directory for profile, front and snapshot CSVs of the finest run; none when unset
    export_dir: Optional[str] = None

    @field_validator("soe_orders")
    @classmethod
    def _check_soe_orders(cls, value):
        bad = [n for n in value if n not in (8, 12, 16)]
        if bad:
            raise ConfigInvalid(f"SOE orders {bad} are not one of 8, 12, 16")
        return value

    @field_validator("times")
    @classmethod
    def _check_times(cls, value):
        if any(t <= 0 for t in value):
            raise ConfigInvalid("every time must be positive")
        return value

    @field_validator("orders", "refinements", "sdc_rounds", "wavenumbers")
    @classmethod
    def _check_positive(cls, value):
        if not value or any(v < 1 for v in value):
            raise ConfigInvalid("need a non-empty list of positive integers")
        return value
