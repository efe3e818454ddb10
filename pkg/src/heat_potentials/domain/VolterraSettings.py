from pydantic import BaseModel, Field

from configuration import GRADED_ORDER, SOE_ORDER, TOL


class VolterraSettings(BaseModel):
    L: int = Field(default=8, ge=1)
    M: int = Field(default=8, ge=1)
    tol: float = Field(default=TOL, gt=0)
    graded_order: int = Field(default=GRADED_ORDER, ge=2)
    soe_order: int = SOE_ORDER
    verbose: bool = False
