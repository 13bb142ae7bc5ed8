import math
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, Field, field_serializer, field_validator, model_validator

from shared.exceptions import config_error
from shared.schemas import SchemaBase

from .constants import BranchKind, CatastropheFamily, LambdaConvention, TANGENCY_TOL


class PolynomialN(BaseModel):
    """Single-variable stationarity function N(E, E) = Σ α_n Eⁿ."""

    coeffs: list[float] = Field(..., min_length=1, description="α_0 … α_N, lowest first")

    @property
    def degree(self) -> int:
        if self.coeffs[-1] == 0:
            raise config_error("Leading coefficient is zero; degree is undefined")
        return len(self.coeffs) - 1

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs)

    def __call__(self, energy):
        return self.as_polynomial()(energy)


class FoldNormalForm(BaseModel):
    """x² - λ = 0 with x = E - a."""

    a: float
    lam: float = Field(..., description="Unfolding parameter λ")
    convention: LambdaConvention = LambdaConvention.CORRECTED

    @property
    def branch(self) -> BranchKind:
        if abs(self.lam) < TANGENCY_TOL:
            return BranchKind.TANGENCY
        return BranchKind.PAIR if self.lam > 0 else BranchKind.NONE

    def roots(self) -> list[float]:
        """Real roots a ± √λ; the double root a at tangency."""
        branch = self.branch
        if branch == BranchKind.TANGENCY:
            return [self.a]
        if branch == BranchKind.PAIR:
            half_width = math.sqrt(self.lam)
            return [self.a - half_width, self.a + half_width]
        return []


class MultiN(SchemaBase):
    """s stationarity functions N_k(E_1, …, E_s) as s-dimensional coefficient arrays.

    funcs[k][i_1, …, i_s] is the coefficient of E_1^i_1 ⋯ E_s^i_s.
    """

    s: int = Field(..., ge=1)
    funcs: list[np.ndarray]

    @field_validator("funcs", mode="before")
    def validate_funcs(cls, v):
        return [np.array(c, dtype=float) for c in v]

    @model_validator(mode="after")
    def validate_arity(self):
        if len(self.funcs) != self.s:
            raise ValueError(f"Expected {self.s} functions, got {len(self.funcs)}")
        for k, c in enumerate(self.funcs):
            if c.ndim != self.s:
                raise ValueError(f"Function {k} has {c.ndim} variables, expected {self.s}")
        return self

    @field_serializer("funcs")
    def serialize_funcs(self, funcs: list[np.ndarray]) -> list:
        return [c.tolist() for c in funcs]

    @classmethod
    def from_polynomial(cls, p: PolynomialN) -> "MultiN":
        return cls(s=1, funcs=[p.coeffs])

    def evaluate(self, point) -> np.ndarray:
        point = np.asarray(point, dtype=float)
        if point.shape != (self.s,):
            raise config_error(f"Point must have {self.s} coordinates")
        return np.array([evaluate_coefficients(c, point) for c in self.funcs])


def evaluate_coefficients(coeffs: np.ndarray, point) -> float:
    """Value of an s-dimensional coefficient array at a point."""
    value = coeffs
    for x in point:
        value = np.polynomial.polynomial.polyval(x, value)
    return float(value)


class CatastrophePotential(BaseModel):
    """Catalog potential V(x) = V₀(x_core) + Σ σ_i x_i² over the remaining variables."""

    family: CatastropheFamily
    order: Optional[int] = Field(None, description="n for the A and D families")
    coeffs: list[float] = Field(default_factory=list, description="Unfolding coefficients a_1 …")
    signature: list[int] = Field(
        default_factory=list, description="Signs of the quadratic form Q"
    )

    @field_validator("signature")
    def validate_signature(cls, v):
        if any(sign not in (1, -1) for sign in v):
            raise ValueError("Quadratic form signature entries must be +1 or -1")
        return v

    @model_validator(mode="after")
    def validate_coefficient_count(self):
        family = self.family
        if family in (CatastropheFamily.A_PLUS, CatastropheFamily.A_MINUS):
            if self.order is None or self.order < 2:
                raise ValueError("A family requires order n >= 2")
        elif family in (CatastropheFamily.D_PLUS, CatastropheFamily.D_MINUS):
            if self.order is None or self.order < 4:
                raise ValueError("D family requires order n >= 4")
        elif self.order is not None:
            raise ValueError(f"{family.value} takes no order")
        expected = expected_coefficient_count(family, self.order)
        if len(self.coeffs) != expected:
            raise ValueError(
                f"{family.value} expects {expected} coefficients, got {len(self.coeffs)}"
            )
        return self

    @property
    def core_variables(self) -> int:
        if self.family in (CatastropheFamily.A_PLUS, CatastropheFamily.A_MINUS):
            return 1
        return 2

    @property
    def variables(self) -> int:
        return self.core_variables + len(self.signature)


def expected_coefficient_count(family: CatastropheFamily, order: Optional[int]) -> int:
    if family in (
        CatastropheFamily.A_PLUS,
        CatastropheFamily.A_MINUS,
        CatastropheFamily.D_PLUS,
        CatastropheFamily.D_MINUS,
    ):
        return order - 1
    return {
        CatastropheFamily.E6_PLUS: 5,
        CatastropheFamily.E6_MINUS: 5,
        CatastropheFamily.E7: 6,
        CatastropheFamily.E8: 7,
    }[family]


class BranchRecord(BaseModel):
    """One grid point of a fold scan."""

    grid_index: int
    alpha0: float
    alpha1: float
    alpha2: float
    a: Optional[float] = None
    lam: Optional[float] = Field(None, serialization_alias="lambda")
    root_low: Optional[float] = None
    root_high: Optional[float] = None
    branch: BranchKind = BranchKind.NONE
    stationary_levels: list[int] = Field(default_factory=list)

    @property
    def root_count(self) -> int:
        if self.branch == BranchKind.PAIR:
            return 2
        return 1 if self.branch == BranchKind.TANGENCY else 0


class ScanResult(BaseModel):
    """Branch records ordered by grid index."""

    convention: LambdaConvention
    match_tol: float
    records: list[BranchRecord]

    def hits(self) -> list[BranchRecord]:
        return [record for record in self.records if record.stationary_levels]
