"""Operator-space calculus on row-major vectorized operators.

With vec(A)[i*d + j] = A[i, j]:
    vec(AB) = (A ⊗ I) vec(B)      vec(BA) = (I ⊗ Aᵀ) vec(B)
"""

import numpy as np

from fock.schemas import FockSpace, OperatorMatrix
from shared.exceptions import config_error

from .schemas import SuperOperator


def vectorize(operator: OperatorMatrix) -> np.ndarray:
    return operator.entries.reshape(-1).copy()


def devectorize(vec, space: FockSpace) -> OperatorMatrix:
    vec = np.asarray(vec, dtype=complex)
    if vec.shape != (space.dim**2,):
        raise config_error(
            f"Vector of shape {vec.shape} cannot be reshaped to a {space.dim}x{space.dim} operator"
        )
    return OperatorMatrix(space=space, entries=vec.reshape(space.dim, space.dim))


def left_mult(operator: OperatorMatrix) -> SuperOperator:
    """L_A: B ↦ AB."""
    identity = np.eye(operator.space.dim)
    return SuperOperator(space=operator.space, entries=np.kron(operator.entries, identity))


def right_mult(operator: OperatorMatrix) -> SuperOperator:
    """R_A: B ↦ BA."""
    identity = np.eye(operator.space.dim)
    return SuperOperator(
        space=operator.space, entries=np.kron(identity, operator.entries.T)
    )


def jordan_superop(operator: OperatorMatrix) -> SuperOperator:
    """B ↦ A∘B = ½(AB + BA)."""
    return 0.5 * (left_mult(operator) + right_mult(operator))


def commutator_superop(operator: OperatorMatrix) -> SuperOperator:
    """B ↦ [A, B] = AB - BA."""
    return left_mult(operator) - right_mult(operator)


def adjoint_superop(superop: SuperOperator) -> SuperOperator:
    """Adjoint under (A|B) = Tr(A†B), which is the conjugate transpose."""
    return SuperOperator(space=superop.space, entries=superop.entries.conj().T)


def hs_inner(left: OperatorMatrix, right: OperatorMatrix) -> complex:
    """Hilbert-Schmidt inner product Tr(A†B)."""
    if left.entries.shape != right.entries.shape:
        raise config_error(
            f"Shape mismatch {left.entries.shape} vs {right.entries.shape}"
        )
    return complex(np.vdot(left.entries, right.entries))
