from typing import Any, Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from fock.schemas import FockSpace, OperatorMatrix
from shared.exceptions import config_error
from shared.schemas import SchemaBase


class SuperOperator(SchemaBase):
    """Linear map on operators, stored as a dim² × dim² matrix.

    Acts on row-major vectorized operators: vec(A)[i*dim + j] = A[i, j].
    """

    space: FockSpace
    entries: np.ndarray

    @field_validator("entries", mode="before")
    def validate_entries(cls, v):
        entries = np.array(v, dtype=complex)
        entries.setflags(write=False)
        return entries

    @model_validator(mode="after")
    def validate_shape(self):
        size = self.space.dim**2
        if self.entries.shape != (size, size):
            raise ValueError(
                f"Superoperator shape {self.entries.shape} does not match ({size}, {size})"
            )
        return self

    @classmethod
    def identity(cls, space: FockSpace) -> "SuperOperator":
        return cls(space=space, entries=np.eye(space.dim**2))

    @classmethod
    def zeros(cls, space: FockSpace) -> "SuperOperator":
        size = space.dim**2
        return cls(space=space, entries=np.zeros((size, size)))

    def apply(self, operator: OperatorMatrix) -> OperatorMatrix:
        if operator.space != self.space:
            raise config_error("Operator and superoperator live on different spaces")
        vec = operator.entries.reshape(-1)
        result = self.entries @ vec
        return OperatorMatrix(space=self.space, entries=result.reshape(self.space.dim, -1))

    def _check_space(self, other: "SuperOperator") -> None:
        if other.space != self.space:
            raise config_error("Superoperators live on different spaces")

    def __matmul__(self, other: "SuperOperator") -> "SuperOperator":
        self._check_space(other)
        return SuperOperator(space=self.space, entries=self.entries @ other.entries)

    def __add__(self, other: "SuperOperator") -> "SuperOperator":
        self._check_space(other)
        return SuperOperator(space=self.space, entries=self.entries + other.entries)

    def __sub__(self, other: "SuperOperator") -> "SuperOperator":
        self._check_space(other)
        return SuperOperator(space=self.space, entries=self.entries - other.entries)

    def __mul__(self, scalar: complex) -> "SuperOperator":
        return SuperOperator(space=self.space, entries=scalar * self.entries)

    __rmul__ = __mul__

    def distance(self, other: "SuperOperator") -> float:
        """Largest absolute entry difference."""
        self._check_space(other)
        return float(np.max(np.abs(self.entries - other.entries)))


class EnergyFunction(BaseModel):
    """Scalar function N(e_left, e_right) of the left/right energy labels.

    The evaluator must broadcast over numpy arrays. Evaluated on the
    diagonal (E, E) it is the stationarity function of a Fock projector.
    """

    name: str
    evaluator: Callable[[Any, Any], Any]

    model_config = ConfigDict(frozen=True)

    def __call__(self, e_left, e_right) -> np.ndarray:
        e_left = np.asarray(e_left, dtype=float)
        e_right = np.asarray(e_right, dtype=float)
        shape = np.broadcast_shapes(e_left.shape, e_right.shape)
        value = np.asarray(self.evaluator(e_left, e_right), dtype=complex)
        return np.broadcast_to(value, shape)

    def on_diagonal(self, energy):
        """N(E, E); real part only when the imaginary part vanishes."""
        value = self(energy, energy)
        if np.all(np.abs(value.imag) == 0.0):
            value = value.real
        if value.ndim == 0:
            return value.item()
        return value

    @classmethod
    def constant(cls, value: complex, name: str = "constant") -> "EnergyFunction":
        return cls(name=name, evaluator=lambda a, b: value)

    @classmethod
    def jordan_polynomial(cls, coeffs, name: str = "jordan-polynomial") -> "EnergyFunction":
        """Σ c_k ((a + b)/2)^k, the spectral image of Σ c_k (½(L_H + R_H))^k."""
        coeffs = np.asarray(coeffs, dtype=float)
        return cls(
            name=name,
            evaluator=lambda a, b: np.polynomial.polynomial.polyval(0.5 * (a + b), coeffs),
        )
