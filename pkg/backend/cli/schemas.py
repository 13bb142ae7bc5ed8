from pathlib import Path
from typing import Any, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PositiveFloat,
    PositiveInt,
    PrivateAttr,
    model_validator,
)

from bifurcation.constants import LambdaConvention
from fock.schemas import FockSpace
from liouvillian.constants import ModelKind
from liouvillian.factory import parse_params
from liouvillian.schemas import ModelParams
from shared.constants import TRUNCATION_MARGIN, OutputFormat
from shared.schemas import ConfigBase

from .constants import InitialStateKind, ReproduceGroup, TaskKind


class SpaceBlock(ConfigBase):
    """Truncation and physical constants; dim is checked against FockSpace later."""

    dim: PositiveInt
    hbar: PositiveFloat = 1.0
    mass: PositiveFloat = 1.0
    omega: PositiveFloat = 1.0

    def to_space(self) -> FockSpace:
        return FockSpace(dim=self.dim, hbar=self.hbar, mass=self.mass, omega=self.omega)


class ModelBlock(ConfigBase):
    kind: ModelKind
    params: dict[str, Any] = Field(default_factory=dict)

    _parsed: Optional[ModelParams] = PrivateAttr(None)

    @model_validator(mode="after")
    def validate_params(self):
        self._parsed = parse_params(self.kind, self.params)
        return self

    @property
    def parsed(self) -> ModelParams:
        return self._parsed


class InitialStateBlock(ConfigBase):
    kind: InitialStateKind = InitialStateKind.FOCK
    n: int = Field(0, ge=0)
    amplitudes: list[float] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_amplitudes(self):
        if self.kind == InitialStateKind.SUPERPOSITION and not self.amplitudes:
            raise ValueError("superposition initial state needs amplitudes")
        return self


class LambdaGrid(ConfigBase):
    """λ sweep at fixed shift a."""

    a: float
    start: float
    stop: float
    num: PositiveInt


class AlphaGrid(ConfigBase):
    alpha0: list[float] = Field(..., min_length=1)
    alpha1: list[float] = Field(..., min_length=1)
    alpha2: list[float] = Field(..., min_length=1)


class ScanGrid(ConfigBase):
    """Exactly one of a λ sweep or an (α₀, α₁, α₂) product grid."""

    lambda_grid: Optional[LambdaGrid] = Field(None, alias="lambda")
    alpha: Optional[AlphaGrid] = None

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    @model_validator(mode="after")
    def validate_single_grid(self):
        if (self.lambda_grid is None) == (self.alpha is None):
            raise ValueError("grid must define exactly one of 'lambda' or 'alpha'")
        return self


class TaskBlock(ConfigBase):
    kind: TaskKind = TaskKind.REPORT
    tol: PositiveFloat = 1e-10
    n_max: Optional[int] = None
    t_final: PositiveFloat = 1.0
    dt: PositiveFloat = 1e-3
    record_every: PositiveInt = 1
    cross_check: bool = False
    svd_tol: PositiveFloat = 1e-9
    match_tol: PositiveFloat = 1e-9
    convention: LambdaConvention = LambdaConvention.CORRECTED
    grid: Optional[ScanGrid] = None
    initial_state: InitialStateBlock = Field(default_factory=InitialStateBlock)
    only: list[ReproduceGroup] = Field(default_factory=list)


class OutputBlock(ConfigBase):
    format: OutputFormat = OutputFormat.CSV
    path: Optional[Path] = None


class RunConfig(ConfigBase):
    """Validated run description: settings, then config document, then flags."""

    space: SpaceBlock
    model: Optional[ModelBlock] = None
    task: TaskBlock = Field(default_factory=TaskBlock)
    output: OutputBlock = Field(default_factory=OutputBlock)
    seed: Optional[int] = None
    workers: PositiveInt = 1

    @model_validator(mode="after")
    def validate_margin(self):
        dim = self.space.dim
        if self.task.kind == TaskKind.REPORT:
            limit = dim - TRUNCATION_MARGIN
            n_max = limit if self.task.n_max is None else self.task.n_max
            if n_max < 0 or n_max > limit:
                raise ValueError(
                    f"truncation margin rule n_max <= dim - {TRUNCATION_MARGIN} violated "
                    f"(dim={dim}, n_max={n_max})"
                )
        return self

    @property
    def n_max(self) -> int:
        if self.task.n_max is not None:
            return self.task.n_max
        return self.space.dim - TRUNCATION_MARGIN


class ComplexValue(BaseModel):
    real: float
    imag: float


class SpectrumDocument(BaseModel):
    model_id: str
    zero_count: int
    eigenvalues: list[ComplexValue]


class KernelRow(BaseModel):
    index: int
    residual: float
    hermitian: bool
    operator_real: list[list[float]]
    operator_imag: list[list[float]]


class NullSpaceDocument(BaseModel):
    model_id: str
    svd_tol: float
    dimension: int
    elements: list[KernelRow]


class EvolutionDocument(BaseModel):
    model_id: str
    dt: float
    steps: int
    times: list[float]
    trace_drift: list[float]
    hermiticity_drift: list[float]
    min_eigenvalue: list[float]
    residual: list[float]
    final_state_real: list[list[float]]
    final_state_imag: list[list[float]]
    exact_distance: Optional[float] = None
