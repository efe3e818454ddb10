from pydantic import BaseModel, Field


class OracleConfig(BaseModel):
    tol: float = Field(default=1e-13, ge=1e-14)
    max_depth: int = Field(default=50, ge=1, le=200)
    order: int = Field(default=20, ge=4)
    split_points: tuple[float, ...] = ()
