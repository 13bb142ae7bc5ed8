import math
from typing import Literal, Union

import numpy as np
from pydantic import Field, field_validator, model_validator

from fock.schemas import FockSpace
from shared.schemas import ConfigBase, SchemaBase
from superop.schemas import EnergyFunction, SuperOperator

from .constants import DEFAULT_DELTA_DIVISOR, ModelKind


class HarmonicParams(ConfigBase):
    """The harmonic generator takes no parameters."""


class NloParams(ConfigBase):
    """Nonlinear oscillator with friction."""

    beta: float = Field(..., description="Friction strength β")
    Omega: float = Field(..., gt=0.0, description="Nonlinear frequency Ω")
    gamma: float = Field(..., description="Quartic coupling γ")
    delta_divisor: Literal[4, 2] = Field(
        DEFAULT_DELTA_DIVISOR,
        description="d in the constant Δ/(dβ) of the stationarity function",
    )

    def delta(self, space: FockSpace) -> float:
        """Δ = Ω² - ω², always derived from Ω."""
        return self.Omega**2 - space.omega**2

    def energy_offset(self, space: FockSpace) -> float:
        return self.delta(space) / (self.delta_divisor * self.beta)

    @classmethod
    def for_level(cls, n: int, beta: float, space: FockSpace) -> "NloParams":
        """Parameters whose single stationary Fock level is n.

        Δ = 2βħω(2n+1), Ω = √(ω² + Δ), γ = βm²ω².
        """
        delta = 2.0 * beta * space.hbar * space.omega * (2 * n + 1)
        return cls(
            beta=beta,
            Omega=math.sqrt(space.omega**2 + delta),
            gamma=beta * space.mass**2 * space.omega**2,
        )


class CosineParams(ConfigBase):
    eps0: float = Field(..., gt=0.0, description="Energy scale ε₀")


class LindbladParams(ConfigBase):
    """Channels V_k = Σ_n v[k][n] Hⁿ.

    Coefficients are real numbers or [re, im] pairs.
    """

    v: list[list[tuple[float, float]]] = Field(..., min_length=1)

    @field_validator("v", mode="before")
    def validate_coefficients(cls, v):
        if not isinstance(v, list):
            return v
        channels = []
        for channel in v:
            if not isinstance(channel, list):
                return v
            coeffs = []
            for c in channel:
                if isinstance(c, (int, float)):
                    coeffs.append((float(c), 0.0))
                elif isinstance(c, complex):
                    coeffs.append((c.real, c.imag))
                else:
                    coeffs.append(tuple(c))
            channels.append(coeffs)
        return channels

    @model_validator(mode="after")
    def validate_channels(self):
        for k, channel in enumerate(self.v):
            if not channel:
                raise ValueError(f"Channel {k} has no coefficients")
            if not all(math.isfinite(re) and math.isfinite(im) for re, im in channel):
                raise ValueError(f"Channel {k} has non-finite coefficients")
        if not any(re != 0.0 or im != 0.0 for channel in self.v for re, im in channel):
            raise ValueError("At least one Lindblad coefficient must be nonzero")
        return self

    def coefficients(self) -> list[np.ndarray]:
        return [np.array([complex(re, im) for re, im in channel]) for channel in self.v]


class FoldParams(ConfigBase):
    """N(E, E) = α₀ + α₁E + α₂E²."""

    alpha0: float
    alpha1: float
    alpha2: float

    def coefficients(self) -> np.ndarray:
        return np.array([self.alpha0, self.alpha1, self.alpha2])


ModelParams = Union[HarmonicParams, NloParams, CosineParams, LindbladParams, FoldParams]


class LiouvillianModel(SchemaBase):
    """Assembled generator Λ together with its stationarity functions."""

    kind: ModelKind
    space: FockSpace
    params: ModelParams
    generator: SuperOperator
    n_funcs: list[EnergyFunction] = Field(default_factory=list)

    @property
    def model_id(self) -> str:
        fields = ",".join(
            f"{key}={value}" for key, value in self.params.model_dump().items()
        )
        return f"{self.kind.value}({fields})" if fields else self.kind.value


class GeneratorCheck(SchemaBase):
    """Worst violations of trace annihilation and Hermiticity preservation."""

    samples: int
    max_trace: float
    max_hermiticity: float
