"""Potentials V with ∂V/∂E_k = N_k, at the level of coefficient arrays."""

import numpy as np
from numpy.polynomial import polynomial as P

from shared.exceptions import config_error

from .constants import POTENTIALITY_TOL
from .schemas import MultiN


def _pad(arrays: list[np.ndarray]) -> list[np.ndarray]:
    shape = tuple(max(sizes) for sizes in zip(*(a.shape for a in arrays)))
    padded = []
    for a in arrays:
        out = np.zeros(shape)
        out[tuple(slice(0, size) for size in a.shape)] = a
        padded.append(out)
    return padded


def _substitute(coeffs: np.ndarray, axis: int, value: float) -> np.ndarray:
    """Fix variable `axis` to `value`; the axis is kept with length one."""
    moved = np.moveaxis(coeffs, axis, 0)
    reduced = P.polyval(value, moved)
    return np.expand_dims(np.asarray(reduced, dtype=float), axis)


def potentiality_check(m: MultiN, tol: float = POTENTIALITY_TOL) -> tuple[bool, float]:
    """Symmetry of the Jacobian ∂N_k/∂E_l = ∂N_l/∂E_k, compared coefficientwise.

    Returns the verdict and the largest coefficient asymmetry.
    """
    if len(m.funcs) != m.s:
        raise config_error(f"Expected {m.s} functions, got {len(m.funcs)}")
    if m.s == 1:
        return True, 0.0
    worst = 0.0
    for k in range(m.s):
        for l in range(k + 1, m.s):
            d_kl, d_lk = _pad([P.polyder(m.funcs[k], axis=l), P.polyder(m.funcs[l], axis=k)])
            worst = max(worst, float(np.max(np.abs(d_kl - d_lk))))
    return worst <= tol, worst


def potential_reconstruct(m: MultiN, base=None) -> np.ndarray:
    """Coefficient array of V with V(base) = 0 and ∇V = (N_1, …, N_s).

    Integrates along the axis-parallel path from base, one variable at a
    time; later variables stay at their base values on each leg.
    """
    potential, asymmetry = potentiality_check(m)
    if not potential:
        raise config_error(f"Functions are not potential (asymmetry {asymmetry:.3e})")
    base = np.zeros(m.s) if base is None else np.asarray(base, dtype=float)
    if base.shape != (m.s,):
        raise config_error(f"Base point must have {m.s} coordinates")

    legs = []
    for k, coeffs in enumerate(m.funcs):
        leg = coeffs
        for j in range(k + 1, m.s):
            leg = _substitute(leg, j, base[j])
        legs.append(P.polyint(leg, lbnd=base[k], axis=k))
    return sum(_pad(legs))


def potential_gradient(potential: np.ndarray) -> list[np.ndarray]:
    return [P.polyder(potential, axis=k) for k in range(potential.ndim)]
