import numpy as np
from numpy.polynomial import Polynomial

from fock.schemas import FockSpace
from liouvillian.schemas import FoldParams
from shared.exceptions import config_error

from .constants import LambdaConvention
from .schemas import FoldNormalForm, PolynomialN


def depressed_shift(p: PolynomialN) -> tuple[float, PolynomialN]:
    """Shift a = -α_{n-1}/(nα_n) so that N(x + a) has no x^{n-1} term."""
    if len(p.coeffs) < 3:
        raise config_error(f"Depressed shift needs degree >= 2, got {len(p.coeffs) - 1}")
    n = p.degree
    a_shift = -p.coeffs[n - 1] / (n * p.coeffs[n])
    shifted = p.as_polynomial()(Polynomial([a_shift, 1.0]))
    coeffs = np.zeros(n + 1)
    coeffs[: shifted.coef.size] = shifted.coef
    return float(a_shift), PolynomialN(coeffs=coeffs.tolist())


def corrected_lambda(params: FoldParams) -> float:
    """(α₁² - 4α₀α₂)/(4α₂²); positive exactly when N has two real roots."""
    return (params.alpha1**2 - 4.0 * params.alpha0 * params.alpha2) / (4.0 * params.alpha2**2)


def fold_normal_form(
    params: FoldParams, convention: LambdaConvention = LambdaConvention.CORRECTED
) -> FoldNormalForm:
    if params.alpha2 == 0:
        raise config_error("Fold normal form requires alpha2 != 0")
    a = -params.alpha1 / (2.0 * params.alpha2)
    lam = corrected_lambda(params)
    if convention == LambdaConvention.PRINTED:
        lam = -lam
    return FoldNormalForm(a=a, lam=lam, convention=convention)


def fold_params_from_normal_form(
    a: float, lam: float, convention: LambdaConvention = LambdaConvention.CORRECTED
) -> FoldParams:
    """Monic quadratic whose normal form under the given convention is (a, λ)."""
    corrected = lam if convention == LambdaConvention.CORRECTED else -lam
    return FoldParams(alpha0=a * a - corrected, alpha1=-2.0 * a, alpha2=1.0)


def fold_params_from_levels(n1: int, n2: int, space: FockSpace) -> FoldParams:
    """Monic quadratic with roots at E_{n1} and E_{n2}."""
    if n1 < 0 or n2 < 0:
        raise config_error(f"Levels must be nonnegative, got {n1}, {n2}")
    if n1 == n2:
        raise config_error("Two distinct levels are needed for a fold pair")
    e1 = space.energy(n1)
    e2 = space.energy(n2)
    return FoldParams(alpha0=e1 * e2, alpha1=-(e1 + e2), alpha2=1.0)


def quadratic_roots(params: FoldParams) -> list[float]:
    """Real roots of α₀ + α₁E + α₂E² straight from the coefficients, ascending."""
    roots = Polynomial([params.alpha0, params.alpha1, params.alpha2]).roots()
    real = [float(r.real) for r in roots if abs(r.imag) <= 1e-12 * max(1.0, abs(r.real))]
    return sorted(real)
