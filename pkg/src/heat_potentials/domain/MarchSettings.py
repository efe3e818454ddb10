from typing import Optional

from pydantic import BaseModel, Field

from configuration import CRAMER_C, SOE_ORDER, TOL, TRUNCATION_RADIUS


class MarchSettings(BaseModel):
    order: int = Field(default=16, ge=2)
    tol: float = Field(default=TOL, gt=0)
    truncation_radius: float = Field(default=TRUNCATION_RADIUS, gt=0)
    cramer_c: float = Field(default=CRAMER_C, gt=0)
    # envelope of |D| and |dD/dy|; estimated from samples when missing
    lam: Optional[float] = Field(default=None, gt=0)
    mu: Optional[float] = Field(default=None, ge=0)
    soe_order: int = SOE_ORDER
    verbose: bool = False
