from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from fock.schemas import OperatorMatrix
from shared.schemas import SchemaBase


class LevelResidual(BaseModel):
    """Residual ‖Λ|n><n|‖ of one Fock projector."""

    n: int = Field(..., ge=0)
    energy: float
    residual: float = Field(..., ge=0.0)
    stationary: bool


class StationarityReport(BaseModel):
    """Fock-projector scan of a single model."""

    model_id: str
    tol: float
    levels: list[LevelResidual]
    stationary_set: list[int]
    function_zero_set: list[int] = Field(
        default_factory=list, description="Levels where every N_k(E_n, E_n) vanishes"
    )
    consistent: bool = True

    @model_validator(mode="after")
    def validate_stationary_set(self):
        expected = [level.n for level in self.levels if level.residual < self.tol]
        if sorted(self.stationary_set) != expected:
            raise ValueError("stationary_set disagrees with the residuals and tol")
        return self


class KernelElement(SchemaBase):
    operator: OperatorMatrix
    residual: float
    hermitian: bool


class EvolutionTrace(SchemaBase):
    """Monitors of a fixed-step trajectory.

    final_state is a plain operator: non-positive excursions are kept as is.
    """

    times: list[float]
    trace_drift: list[float]
    hermiticity_drift: list[float]
    min_eigenvalue: list[float]
    residual: list[float]
    final_state: OperatorMatrix
    dt: float
    steps: int
    exact_final_state: Optional[OperatorMatrix] = None
    exact_distance: Optional[float] = None

    @field_validator("times")
    def validate_times(cls, v):
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("times must be strictly increasing")
        return v
