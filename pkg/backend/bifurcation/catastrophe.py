"""Catalog potentials of the elementary catastrophes and their critical points."""

import itertools

import numpy as np
import scipy.optimize
from loguru import logger
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from shared.exceptions import config_error

from .constants import (
    DEDUP_TOL,
    DEFAULT_SEARCH_BOX,
    GRADIENT_TOL,
    GRID_STARTS_PER_AXIS,
    CatastropheFamily,
)
from .normal_form import depressed_shift
from .schemas import CatastrophePotential, PolynomialN


def _a_core(c: CatastrophePotential) -> np.ndarray:
    """±x^{n+1} + Σ_{j=1}^{n-1} a_j x^j."""
    n = c.order
    coeffs = np.zeros(n + 2)
    coeffs[n + 1] = 1.0 if c.family == CatastropheFamily.A_PLUS else -1.0
    coeffs[1:n] = c.coeffs
    return coeffs


def _d_core(c: CatastrophePotential) -> np.ndarray:
    """x₁²x₂ ± x₂^{n-1} + Σ_{j=1}^{n-3} a_j x₂^j + a_{n-2} x₁ + a_{n-1} x₁²."""
    n = c.order
    coeffs = np.zeros((3, n))
    coeffs[2, 1] = 1.0
    coeffs[0, n - 1] += 1.0 if c.family == CatastropheFamily.D_PLUS else -1.0
    for j in range(1, n - 2):
        coeffs[0, j] += c.coeffs[j - 1]
    coeffs[1, 0] += c.coeffs[n - 3]
    coeffs[2, 0] += c.coeffs[n - 2]
    return coeffs


def _e6_core(c: CatastrophePotential) -> np.ndarray:
    coeffs = np.zeros((4, 5))
    coeffs[3, 0] = 1.0
    coeffs[0, 4] = 1.0 if c.family == CatastropheFamily.E6_PLUS else -1.0
    a = c.coeffs
    coeffs[0, 1] += a[0]
    coeffs[0, 2] += a[1]
    for j in range(3, 6):
        coeffs[1, j - 3] += a[j - 1]
    return coeffs


def _e7_core(c: CatastrophePotential) -> np.ndarray:
    coeffs = np.zeros((4, 5))
    coeffs[3, 0] = 1.0
    coeffs[1, 3] = 1.0
    a = c.coeffs
    for j in range(1, 5):
        coeffs[0, j] += a[j - 1]
    for j in range(5, 7):
        coeffs[1, j - 5] += a[j - 1]
    return coeffs


def _e8_core(c: CatastrophePotential) -> np.ndarray:
    coeffs = np.zeros((4, 6))
    coeffs[3, 0] = 1.0
    coeffs[0, 5] = 1.0
    a = c.coeffs
    for j in range(1, 4):
        coeffs[0, j] += a[j - 1]
    for j in range(4, 8):
        coeffs[1, j - 4] += a[j - 1]
    return coeffs


CORE_BUILDERS = {
    CatastropheFamily.A_PLUS: _a_core,
    CatastropheFamily.A_MINUS: _a_core,
    CatastropheFamily.D_PLUS: _d_core,
    CatastropheFamily.D_MINUS: _d_core,
    CatastropheFamily.E6_PLUS: _e6_core,
    CatastropheFamily.E6_MINUS: _e6_core,
    CatastropheFamily.E7: _e7_core,
    CatastropheFamily.E8: _e8_core,
}


def core_coefficients(c: CatastrophePotential) -> np.ndarray:
    """V₀ as a coefficient array in the core variables (1-D or 2-D)."""
    builder = CORE_BUILDERS.get(c.family)
    if builder is None:
        raise config_error(f"Unknown catastrophe family {c.family}")
    return builder(c)


def _eval_core(coeffs: np.ndarray, core) -> float:
    if coeffs.ndim == 1:
        return float(P.polyval(core[0], coeffs))
    return float(P.polyval2d(core[0], core[1], coeffs))


def catastrophe_potential_eval(c: CatastrophePotential, x) -> float:
    """V(x) = V₀(core) + Σ σ_i x_i² over the non-core coordinates."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (c.variables,):
        raise config_error(f"{c.family.value} takes {c.variables} coordinates, got {x.size}")
    core = x[: c.core_variables]
    rest = x[c.core_variables :]
    quadratic = float(np.dot(c.signature, rest**2)) if rest.size else 0.0
    return _eval_core(core_coefficients(c), core) + quadratic


def _dedup(points: list[np.ndarray]) -> list[np.ndarray]:
    unique: list[np.ndarray] = []
    for point in points:
        if all(np.max(np.abs(point - other)) > DEDUP_TOL for other in unique):
            unique.append(point)
    return unique


def _critical_points_1d(coeffs: np.ndarray, box: tuple[float, float]) -> list[np.ndarray]:
    roots = Polynomial(coeffs).deriv().roots()
    low, high = box
    points = []
    for r in roots:
        if abs(r.imag) > GRADIENT_TOL * max(1.0, abs(r.real)):
            continue
        value = float(r.real)
        if low <= value <= high:
            points.append(np.array([value]))
    return points


def _critical_points_2d(
    coeffs: np.ndarray, box: tuple[float, float], starts: int
) -> list[np.ndarray]:
    d1 = P.polyder(coeffs, axis=0)
    d2 = P.polyder(coeffs, axis=1)
    d11 = P.polyder(d1, axis=0)
    d12 = P.polyder(d1, axis=1)
    d22 = P.polyder(d2, axis=1)

    def gradient(z):
        return np.array([P.polyval2d(z[0], z[1], d1), P.polyval2d(z[0], z[1], d2)])

    def hessian(z):
        off = P.polyval2d(z[0], z[1], d12)
        return np.array(
            [[P.polyval2d(z[0], z[1], d11), off], [off, P.polyval2d(z[0], z[1], d22)]]
        )

    low, high = box
    grid = np.linspace(low, high, starts)
    points = []
    for x0 in itertools.product(grid, grid):
        solution = scipy.optimize.root(gradient, np.array(x0), jac=hessian, method="hybr")
        z = solution.x
        if not np.all(np.isfinite(z)):
            continue
        if np.max(np.abs(gradient(z))) >= GRADIENT_TOL:
            continue
        if np.all((z >= low - DEDUP_TOL) & (z <= high + DEDUP_TOL)):
            points.append(z)
    return points


def critical_points(
    c: CatastrophePotential,
    box: tuple[float, float] = DEFAULT_SEARCH_BOX,
    starts: int = GRID_STARTS_PER_AXIS,
) -> list[np.ndarray]:
    """Critical points of V inside the box, sorted lexicographically.

    The quadratic form contributes zeros in the non-core coordinates.
    """
    low, high = box
    if not low < high:
        raise config_error(f"Search box must satisfy low < high, got {box}")
    coeffs = core_coefficients(c)
    if coeffs.ndim == 1:
        core_points = _critical_points_1d(coeffs, box)
    else:
        core_points = _critical_points_2d(coeffs, box, starts)
    core_points = _dedup(core_points)
    if not core_points:
        logger.warning(f"{c.family.value}: no critical points found in box {box}")
    tail = np.zeros(len(c.signature))
    points = [np.concatenate([p, tail]) for p in core_points]
    return sorted(points, key=lambda p: tuple(p))


def catastrophe_from_polynomial(p: PolynomialN) -> tuple[float, CatastrophePotential]:
    """A_{±n} potential whose derivative is proportional to N(x + a).

    Returns the depressed shift a and the potential V(x) = ±x^{n+1} +
    Σ_{j=1}^{n-1} a_j x^j; critical points of V are the roots of N shifted by a.
    """
    a_shift, shifted = depressed_shift(p)
    n = shifted.degree
    leading = shifted.coeffs[n]
    # V' = (n+1)·N(x + a)/|α_n|
    scaled = (n + 1) * np.asarray(shifted.coeffs) / abs(leading)
    unfolding = [float(scaled[j - 1] / j) for j in range(1, n)]
    family = CatastropheFamily.A_PLUS if leading > 0 else CatastropheFamily.A_MINUS
    return a_shift, CatastrophePotential(family=family, order=n, coeffs=unfolding)
