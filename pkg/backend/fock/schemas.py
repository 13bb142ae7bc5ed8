from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from shared.exceptions import config_error
from shared.schemas import SchemaBase

from .constants import (
    DENSITY_HERMITICITY_TOL,
    DENSITY_MIN_EIGENVALUE,
    DENSITY_TRACE_TOL,
    MIN_DIM,
)


class FockSpace(BaseModel):
    """Truncated oscillator Hilbert space with the constants fixing its basis."""

    dim: int = Field(..., ge=MIN_DIM, description="Number of Fock levels retained")
    hbar: float = Field(1.0, gt=0.0, description="Action unit")
    mass: float = Field(1.0, gt=0.0, description="Oscillator mass")
    omega: float = Field(1.0, gt=0.0, description="Angular frequency")

    model_config = ConfigDict(frozen=True, extra="forbid")

    @property
    def q0(self) -> float:
        """Oscillator length √(ħ/mω)."""
        return float(np.sqrt(self.hbar / (self.mass * self.omega)))

    @property
    def quantum(self) -> float:
        """Level spacing ħω."""
        return self.hbar * self.omega

    def energy(self, n: int) -> float:
        return 0.5 * self.hbar * self.omega * (2 * n + 1)

    def energies(self) -> np.ndarray:
        n = np.arange(self.dim)
        return 0.5 * self.hbar * self.omega * (2 * n + 1)


class OperatorMatrix(SchemaBase):
    """Dense complex operator on a truncated Fock space."""

    space: FockSpace
    entries: np.ndarray

    @field_validator("entries", mode="before")
    def validate_entries(cls, v):
        entries = np.array(v, dtype=complex)
        entries.setflags(write=False)
        return entries

    @model_validator(mode="after")
    def validate_shape(self):
        expected = (self.space.dim, self.space.dim)
        if self.entries.shape != expected:
            raise ValueError(
                f"Operator shape {self.entries.shape} does not match space dimension {expected}"
            )
        return self

    @field_serializer("entries")
    def serialize_entries(self, entries: np.ndarray) -> dict[str, Any]:
        return {"real": entries.real.tolist(), "imag": entries.imag.tolist()}

    @classmethod
    def identity(cls, space: FockSpace) -> "OperatorMatrix":
        return cls(space=space, entries=np.eye(space.dim))

    @classmethod
    def zeros(cls, space: FockSpace) -> "OperatorMatrix":
        return cls(space=space, entries=np.zeros((space.dim, space.dim)))

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(space=self.space, entries=self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self.entries))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def is_hermitian(self, tol: float = DENSITY_HERMITICITY_TOL) -> bool:
        return self.hermiticity_error() <= tol

    def is_diagonal(self, tol: float = 1e-12) -> bool:
        off_diagonal = self.entries - np.diag(np.diag(self.entries))
        return float(np.max(np.abs(off_diagonal))) <= tol

    def leading_block(self, size: int) -> np.ndarray:
        return self.entries[:size, :size]

    def _check_space(self, other: "OperatorMatrix") -> None:
        if other.space != self.space:
            raise config_error("Operators live on different Fock spaces")

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_space(other)
        return OperatorMatrix(space=self.space, entries=self.entries @ other.entries)

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_space(other)
        return OperatorMatrix(space=self.space, entries=self.entries + other.entries)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        self._check_space(other)
        return OperatorMatrix(space=self.space, entries=self.entries - other.entries)

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        return OperatorMatrix(space=self.space, entries=scalar * self.entries)

    __rmul__ = __mul__


class DensityMatrix(OperatorMatrix):
    """Validated quantum state: Hermitian, unit trace, positive semidefinite."""

    @model_validator(mode="after")
    def validate_state(self):
        if self.hermiticity_error() > DENSITY_HERMITICITY_TOL:
            raise ValueError("Density matrix is not Hermitian")
        trace = np.trace(self.entries)
        if abs(trace - 1.0) > DENSITY_TRACE_TOL:
            raise ValueError(f"Density matrix trace {trace} is not 1")
        hermitian_part = 0.5 * (self.entries + self.entries.conj().T)
        min_eigenvalue = float(np.linalg.eigvalsh(hermitian_part)[0])
        if min_eigenvalue < DENSITY_MIN_EIGENVALUE:
            raise ValueError(f"Density matrix has negative eigenvalue {min_eigenvalue}")
        return self


class EnergyLevel(BaseModel):
    """Closed-form oscillator level E_n = ½ħω(2n+1)."""

    n: int = Field(..., ge=0)
    energy: float

    @classmethod
    def of(cls, space: FockSpace, n: int) -> "EnergyLevel":
        return cls(n=n, energy=space.energy(n))
