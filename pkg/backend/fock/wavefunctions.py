"""Position-space eigenfunctions of the oscillator.

Values are L²-normalized: Ψ_n(x) = (2ⁿ n! √π q₀)^(-1/2) H_n(x/q₀) exp(-x²/2q₀²).
The closed-form prefactor 1/q₀ that appears in some texts is schematic and
is not used here.
"""

import numpy as np
from numpy.polynomial.hermite import hermgauss

from shared.exceptions import config_error

from .constants import DEFAULT_QUADRATURE_ORDER
from .schemas import FockSpace


def _normalized_hermite_functions(n_max: int, xi: np.ndarray) -> np.ndarray:
    """Rows 0..n_max of ψ_k(ξ) by the three-term recurrence.

    ψ_0 = π^(-1/4) e^(-ξ²/2), ψ_1 = √2 ξ ψ_0,
    ψ_{k+1} = √(2/(k+1)) ξ ψ_k - √(k/(k+1)) ψ_{k-1}.
    """
    values = np.empty((n_max + 1,) + xi.shape, dtype=float)
    values[0] = np.pi**-0.25 * np.exp(-0.5 * xi**2)
    if n_max >= 1:
        values[1] = np.sqrt(2.0) * xi * values[0]
    for k in range(1, n_max):
        values[k + 1] = (
            np.sqrt(2.0 / (k + 1.0)) * xi * values[k]
            - np.sqrt(k / (k + 1.0)) * values[k - 1]
        )
    return values


def hermite_wavefunction(space: FockSpace, n: int, x):
    """Normalized eigenfunction Ψ_n evaluated at x (scalar or array)."""
    if n < 0:
        raise config_error(f"Level index must be nonnegative, got {n}")
    x_arr = np.asarray(x, dtype=float)
    xi = x_arr / space.q0
    value = _normalized_hermite_functions(n, xi)[n] / np.sqrt(space.q0)
    if x_arr.ndim == 0:
        return float(value)
    return value


def overlap_matrix(
    space: FockSpace, n_max: int, order: int = DEFAULT_QUADRATURE_ORDER
) -> np.ndarray:
    """⟨Ψ_n|Ψ_m⟩ for n, m ≤ n_max by Gauss-Hermite quadrature in x."""
    if order <= n_max:
        raise config_error(
            f"Quadrature order {order} cannot resolve levels up to {n_max}"
        )
    nodes, weights = hermgauss(order)
    x = space.q0 * nodes
    values = np.stack([hermite_wavefunction(space, n, x) for n in range(n_max + 1)])
    # the quadrature weight e^(-ξ²) is divided back out of the integrand
    scaled = weights * np.exp(nodes**2) * space.q0
    return (values * scaled) @ values.T
