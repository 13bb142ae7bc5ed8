"""Canonical operators of the truncated oscillator."""

from typing import Optional

import numpy as np
from loguru import logger

from shared.exceptions import config_error

from .schemas import DensityMatrix, EnergyLevel, FockSpace, OperatorMatrix


def annihilation_matrix(dim: int) -> np.ndarray:
    """Truncated lowering operator a with a|n> = √n |n-1>."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1)


def creation_matrix(dim: int) -> np.ndarray:
    return annihilation_matrix(dim).T


def build_canonical_ops(space: FockSpace) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Position and momentum from truncated ladder operators.

    q = q₀(a + a†)/√2 and p = iħ(a† - a)/(√2 q₀), so that off-diagonal
    elements of q are q₀√((n+1)/2). Both are Hermitian by construction;
    [q, p] = iħ holds on every level except the last.
    """
    a = annihilation_matrix(space.dim)
    a_dag = creation_matrix(space.dim)
    q0 = space.q0
    q = q0 / np.sqrt(2.0) * (a + a_dag)
    p = 1j * space.hbar / (np.sqrt(2.0) * q0) * (a_dag - a)
    return (
        OperatorMatrix(space=space, entries=q),
        OperatorMatrix(space=space, entries=p),
    )


def build_harmonic_h(space: FockSpace) -> OperatorMatrix:
    """Exactly diagonal oscillator Hamiltonian diag(E_0, ..., E_{dim-1})."""
    return OperatorMatrix(space=space, entries=np.diag(space.energies()))


def build_product_h(space: FockSpace) -> OperatorMatrix:
    """p²/2m + mω²q²/2 from truncated q, p; corrupt on the top level."""
    q, p = build_canonical_ops(space)
    q2 = q.entries @ q.entries
    p2 = p.entries @ p.entries
    entries = p2 / (2.0 * space.mass) + 0.5 * space.mass * space.omega**2 * q2
    return OperatorMatrix(space=space, entries=entries)


def build_nl_h(space: FockSpace, Omega: float, gamma: float) -> OperatorMatrix:
    """Nonlinear Hamiltonian p²/2m + mΩ²q²/2 + γq⁴/2 from truncated q, p."""
    if Omega <= 0:
        raise config_error(f"Nonlinear frequency must be positive, got {Omega}")
    q, p = build_canonical_ops(space)
    q2 = q.entries @ q.entries
    p2 = p.entries @ p.entries
    entries = (
        p2 / (2.0 * space.mass)
        + 0.5 * space.mass * Omega**2 * q2
        + 0.5 * gamma * (q2 @ q2)
    )
    # symmetrize away rounding so the result is Hermitian to machine precision
    entries = 0.5 * (entries + entries.conj().T)
    return OperatorMatrix(space=space, entries=entries)


def fock_projector(space: FockSpace, n: int) -> DensityMatrix:
    """Pure stationary state |n><n|."""
    if not 0 <= n < space.dim:
        raise config_error(f"Fock index {n} out of range for dim={space.dim}")
    entries = np.zeros((space.dim, space.dim), dtype=complex)
    entries[n, n] = 1.0
    return DensityMatrix(space=space, entries=entries)


def energy_levels(space: FockSpace, n_max: Optional[int] = None) -> list[EnergyLevel]:
    n_max = space.dim - 1 if n_max is None else n_max
    return [EnergyLevel.of(space, n) for n in range(n_max + 1)]


def pure_state(space: FockSpace, amplitudes) -> DensityMatrix:
    """|ψ><ψ| for ψ with the given (unnormalized) Fock amplitudes."""
    psi = np.zeros(space.dim, dtype=complex)
    amplitudes = np.asarray(amplitudes, dtype=complex)
    if amplitudes.size == 0 or amplitudes.size > space.dim:
        raise config_error(
            f"Expected between 1 and {space.dim} amplitudes, got {amplitudes.size}"
        )
    psi[: amplitudes.size] = amplitudes
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise config_error("State amplitudes are all zero")
    psi /= norm
    return DensityMatrix(space=space, entries=np.outer(psi, psi.conj()))


def maximally_mixed(space: FockSpace) -> DensityMatrix:
    return DensityMatrix(space=space, entries=np.eye(space.dim) / space.dim)


def random_density_matrix(
    space: FockSpace, rng: np.random.Generator, rank: Optional[int] = None
) -> DensityMatrix:
    """Ginibre-distributed state of the given rank (full rank by default)."""
    rank = space.dim if rank is None else rank
    ginibre = rng.standard_normal((space.dim, rank)) + 1j * rng.standard_normal(
        (space.dim, rank)
    )
    rho = ginibre @ ginibre.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    rho /= np.trace(rho).real
    logger.debug(f"Drew random state of rank {rank} on dim={space.dim}")
    return DensityMatrix(space=space, entries=rho)


def random_operator(space: FockSpace, rng: np.random.Generator) -> OperatorMatrix:
    entries = rng.standard_normal((space.dim, space.dim)) + 1j * rng.standard_normal(
        (space.dim, space.dim)
    )
    return OperatorMatrix(space=space, entries=entries)
