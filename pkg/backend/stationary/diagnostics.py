"""Residuals, Fock-projector scans, kernels and spectra of a generator."""

from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
import scipy.linalg
from loguru import logger

from fock.operators import fock_projector
from fock.schemas import OperatorMatrix
from liouvillian.builders import function_zero_set
from liouvillian.schemas import LiouvillianModel
from shared.constants import TRUNCATION_MARGIN
from shared.exceptions import config_error, numerical_error
from superop.calculus import devectorize

from .constants import DEFAULT_ZERO_TOL, MAX_SUPEROPERATOR_SIZE
from .schemas import KernelElement, LevelResidual, StationarityReport


def residual(model: LiouvillianModel, rho: OperatorMatrix) -> float:
    """Frobenius norm of Λρ."""
    if rho.space != model.space:
        raise config_error("State and model live on different Fock spaces")
    return model.generator.apply(rho).norm()


def check_margin(model: LiouvillianModel, n_max: int) -> None:
    limit = model.space.dim - TRUNCATION_MARGIN
    if n_max < 0:
        raise config_error(f"n_max must be nonnegative, got {n_max}")
    if n_max > limit:
        raise config_error(
            f"n_max={n_max} violates the truncation margin: need n_max <= dim - "
            f"{TRUNCATION_MARGIN} = {limit}"
        )


def fock_scan(
    model: LiouvillianModel, n_max: int, tol: float, workers: int = 1
) -> StationarityReport:
    """Residual of every |n><n| for n ≤ n_max, cross-checked against N_k(E_n, E_n)."""
    check_margin(model, n_max)

    def level_residual(n: int) -> LevelResidual:
        value = residual(model, fock_projector(model.space, n))
        return LevelResidual(
            n=n, energy=model.space.energy(n), residual=value, stationary=value < tol
        )

    indices = range(n_max + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            levels = list(executor.map(level_residual, indices))
    else:
        levels = [level_residual(n) for n in indices]

    stationary_set = [level.n for level in levels if level.stationary]
    if model.n_funcs:
        zeros = function_zero_set(model, n_max, tol)
    else:
        # a pure commutator leaves every eigenprojector fixed
        zeros = list(indices)
    consistent = zeros == stationary_set
    if not consistent:
        logger.warning(
            f"{model.model_id}: operator residuals give {stationary_set}, "
            f"function zeros give {zeros}"
        )
    logger.info(f"{model.model_id}: stationary levels {stationary_set} for n <= {n_max}")
    return StationarityReport(
        model_id=model.model_id,
        tol=tol,
        levels=levels,
        stationary_set=stationary_set,
        function_zero_set=zeros,
        consistent=consistent,
    )


def _check_size(model: LiouvillianModel) -> np.ndarray:
    matrix = model.generator.entries
    if matrix.shape[0] > MAX_SUPEROPERATOR_SIZE:
        raise config_error(
            f"Dense decomposition limited to dim^2 <= {MAX_SUPEROPERATOR_SIZE}, got {matrix.shape[0]}"
        )
    return matrix


def _hermitian_basis(kernel: np.ndarray, dim: int, tol: float) -> Optional[np.ndarray]:
    """Real combinations of kernel vectors that are Hermitian operators.

    Hermitian and anti-Hermitian parts of every kernel element are stacked as
    real vectors; an orthonormal basis of their span is a Hilbert-Schmidt
    orthonormal Hermitian basis of the kernel when the kernel is closed
    under ρ ↦ ρ†. Returns None when it is not.
    """
    candidates = []
    for column in kernel.T:
        B = column.reshape(dim, dim)
        for part in (0.5 * (B + B.conj().T), (B - B.conj().T) / 2j):
            vec = part.reshape(-1)
            candidates.append(np.concatenate([vec.real, vec.imag]))
    stacked = np.array(candidates).T
    u, s, _ = scipy.linalg.svd(stacked, full_matrices=False)
    rank = int(np.sum(s > tol * max(s[0], 1.0)))
    if rank != kernel.shape[1]:
        return None
    real_basis = u[:, :rank]
    size = dim * dim
    return real_basis[:size] + 1j * real_basis[size:]


def null_space(model: LiouvillianModel, svd_tol: float) -> list[KernelElement]:
    """Hilbert-Schmidt orthonormal basis of the numerical kernel of Λ.

    Singular values below svd_tol times the largest one count as zero. The
    basis is made Hermitian when the kernel allows it.
    """
    matrix = _check_size(model)
    try:
        kernel = scipy.linalg.null_space(matrix, rcond=svd_tol)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise numerical_error(f"Kernel decomposition failed: {e}")

    dim = model.space.dim
    if kernel.shape[1] > 0:
        hermitian = _hermitian_basis(kernel, dim, svd_tol)
        if hermitian is None:
            logger.warning(
                f"{model.model_id}: kernel is not closed under adjoint, keeping raw basis"
            )
        else:
            kernel = hermitian

    elements = []
    for column in kernel.T:
        operator = devectorize(column, model.space)
        elements.append(
            KernelElement(
                operator=operator,
                residual=residual(model, operator),
                hermitian=operator.is_hermitian(svd_tol),
            )
        )
    logger.info(f"{model.model_id}: kernel dimension {len(elements)}")
    return elements


def spectrum(model: LiouvillianModel) -> np.ndarray:
    """Eigenvalues of Λ ordered by real part, then imaginary part."""
    matrix = _check_size(model)
    try:
        eigenvalues = scipy.linalg.eigvals(matrix)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise numerical_error(f"Eigenvalue decomposition failed: {e}")
    order = np.lexsort((eigenvalues.imag, eigenvalues.real))
    return eigenvalues[order]


def count_zero_eigenvalues(eigenvalues, tol: float = DEFAULT_ZERO_TOL) -> int:
    """Eigenvalues with modulus below tol·max(1, max|λ|)."""
    eigenvalues = np.asarray(eigenvalues)
    if eigenvalues.size == 0:
        return 0
    scale = max(1.0, float(np.max(np.abs(eigenvalues))))
    return int(np.sum(np.abs(eigenvalues) < tol * scale))
