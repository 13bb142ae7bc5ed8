"""Functions of (L_H, R_H) for diagonal H.

L_H and R_H are simultaneously diagonal on |n><m| with eigenvalues E_n and
E_m, so f(L_H, R_H) multiplies the (n, m) entry of ρ by f(E_n, E_m).
"""

import numpy as np
from loguru import logger

from fock.schemas import OperatorMatrix
from shared.exceptions import config_error

from .calculus import adjoint_superop, jordan_superop
from .schemas import EnergyFunction, SuperOperator

DIAGONAL_TOL = 1e-12


def _diagonal_energies(H: OperatorMatrix) -> np.ndarray:
    if not H.is_diagonal(DIAGONAL_TOL):
        raise config_error("Spectral superoperators require H diagonal within 1e-12")
    return np.diag(H.entries).real.copy()


def energy_function_grid(f: EnergyFunction, H: OperatorMatrix) -> np.ndarray:
    """Matrix of f(E_n, E_m) over the truncated spectrum."""
    energies = _diagonal_energies(H)
    return np.array(f(energies[:, None], energies[None, :]), dtype=complex)


def energy_function_superop(f: EnergyFunction, H: OperatorMatrix) -> SuperOperator:
    grid = energy_function_grid(f, H)
    logger.debug(f"Built spectral superoperator {f.name} on dim={H.space.dim}")
    return SuperOperator(space=H.space, entries=np.diag(grid.reshape(-1)))


def n_operator(f: EnergyFunction, H: OperatorMatrix) -> OperatorMatrix:
    """N(H, H) as the diagonal matrix of conj f(E_n, E_n)."""
    energies = _diagonal_energies(H)
    values = np.conj(f(energies, energies))
    return OperatorMatrix(space=H.space, entries=np.diag(values))


def n_operator_via_adjoint(f: EnergyFunction, H: OperatorMatrix) -> OperatorMatrix:
    """N(H, H) = N†(L_H, R_H) I, through the superoperator adjoint."""
    superop = adjoint_superop(energy_function_superop(f, H))
    return superop.apply(OperatorMatrix.identity(H.space))


def polynomial_superop(coeffs, H: OperatorMatrix) -> SuperOperator:
    """Σ c_k (½(L_H + R_H))^k built from explicit superoperator products.

    Used to check energy_function_superop against the operator algebra.
    """
    jordan = jordan_superop(H)
    result = SuperOperator.zeros(H.space)
    power = SuperOperator.identity(H.space)
    for c in coeffs:
        result = result + complex(c) * power
        power = jordan @ power
    return result
