"""Independent constructions used to cross-check the spectral generators.

Everything here is assembled literally from matrix products of truncated
q, p and H, never through energy_function_superop.
"""

import math

import numpy as np
from loguru import logger

from fock.operators import build_canonical_ops, build_harmonic_h, build_nl_h, build_product_h
from fock.schemas import FockSpace, OperatorMatrix
from shared.exceptions import config_error
from superop.calculus import commutator_superop, jordan_superop, left_mult, right_mult
from superop.schemas import SuperOperator

from .constants import DEFAULT_DELTA_DIVISOR
from .schemas import LindbladParams, NloParams

GAMMA_SIGNS = (1, -1)


def nlo_raw_generator(space: FockSpace, params: NloParams) -> SuperOperator:
    """ρ ↦ -(i/ħ)[H_nl, ρ] + (iβ/ħ)[q², p²∘ρ]."""
    q, p = build_canonical_ops(space)
    H_nl = build_nl_h(space, params.Omega, params.gamma)
    hamiltonian = (-1j / space.hbar) * commutator_superop(H_nl)
    friction = (1j * params.beta / space.hbar) * (
        commutator_superop(q @ q) @ jordan_superop(p @ p)
    )
    return hamiltonian + friction


def nlo_jordan_generator(
    space: FockSpace,
    params: NloParams,
    sign: int,
    delta_divisor: int = DEFAULT_DELTA_DIVISOR,
) -> SuperOperator:
    """ρ ↦ -(i/ħ)[H, ρ] + (2imβ/ħ)[q², K∘ρ] with K = p²/2m + sign·γq²/(2mβ) - Δ/(dβ).

    H = p²/2m + mω²q²/2 is built from truncated products here.
    """
    if sign not in GAMMA_SIGNS:
        raise config_error(f"sign must be +1 or -1, got {sign}")
    if params.beta == 0:
        raise config_error("nlo generator requires beta != 0")
    q, p = build_canonical_ops(space)
    q2 = q @ q
    p2 = p @ p
    m = space.mass
    identity = OperatorMatrix.identity(space)
    K = (
        (1.0 / (2.0 * m)) * p2
        + (sign * params.gamma / (2.0 * m * params.beta)) * q2
        - (params.delta(space) / (delta_divisor * params.beta)) * identity
    )
    hamiltonian = (-1j / space.hbar) * commutator_superop(build_product_h(space))
    friction = (2j * m * params.beta / space.hbar) * (
        commutator_superop(q2) @ jordan_superop(K)
    )
    return hamiltonian + friction


def resolve_nlo_gamma_sign(
    space: FockSpace, params: NloParams, rng: np.random.Generator, samples: int = 5
) -> tuple[int, dict[int, float]]:
    """Sign of the γq² term for which the Jordan form reproduces the raw form.

    Returns the sign and the relative mismatch measured for each candidate.
    """
    raw = nlo_raw_generator(space, params)
    mismatch = {}
    for sign in GAMMA_SIGNS:
        candidate = nlo_jordan_generator(space, params, sign)
        worst = 0.0
        for _ in range(samples):
            rho = rng.standard_normal((space.dim, space.dim)) + 1j * rng.standard_normal(
                (space.dim, space.dim)
            )
            rho = OperatorMatrix(space=space, entries=0.5 * (rho + rho.conj().T))
            expected = raw.apply(rho)
            diff = (candidate.apply(rho) - expected).norm()
            worst = max(worst, diff / max(expected.norm(), 1.0))
        mismatch[sign] = worst
    sign = min(mismatch, key=mismatch.get)
    logger.info(f"nlo gamma sign resolved to {sign:+d}, mismatch {mismatch}")
    return sign, mismatch


def lindblad_channel_matrices(space: FockSpace, params: LindbladParams) -> list[OperatorMatrix]:
    """V_k = Σ_n v_kn Hⁿ as dense matrices."""
    H = build_harmonic_h(space).entries
    channels = []
    for coeffs in params.coefficients():
        V = np.zeros((space.dim, space.dim), dtype=complex)
        power = np.eye(space.dim)
        for c in coeffs:
            V = V + c * power
            power = power @ H
        channels.append(OperatorMatrix(space=space, entries=V))
    return channels


def lindblad_dissipator_generator(space: FockSpace, params: LindbladParams) -> SuperOperator:
    """-(i/ħ)[H, ρ] + (1/2ħ)Σ_k (2V_kρV_k† - V_k†V_kρ - ρV_k†V_k)."""
    H = build_harmonic_h(space)
    generator = (-1j / space.hbar) * commutator_superop(H)
    for V in lindblad_channel_matrices(space, params):
        V_dag = V.dagger()
        VdV = V_dag @ V
        dissipator = 2.0 * (left_mult(V) @ right_mult(V_dag)) - left_mult(VdV) - right_mult(VdV)
        generator = generator + (1.0 / (2.0 * space.hbar)) * dissipator
    return generator


def fold_first_friction_term(space: FockSpace, alpha0: float) -> SuperOperator:
    """-(i/ħ)[H, ρ] + α₀(i/ħ)[q, p∘ρ] from explicit products."""
    q, p = build_canonical_ops(space)
    H = build_harmonic_h(space)

    # ρ ↦ q(pρ + ρp)/2 - (pρ + ρp)q/2
    qp = q @ p
    pq = p @ q
    friction = 0.5 * (
        left_mult(qp)
        + left_mult(q) @ right_mult(p)
        - right_mult(pq)
        - left_mult(p) @ right_mult(q)
    )
    return (-1j / space.hbar) * commutator_superop(H) + (alpha0 * 1j / space.hbar) * friction


def cosine_series_superop(space: FockSpace, eps0: float, order: int = 40) -> SuperOperator:
    """cos(π(L_H + R_H)/(2ε₀)) summed as a Taylor series up to the given order."""
    H = build_harmonic_h(space)
    total = left_mult(H) + right_mult(H)
    scale = math.pi / (2.0 * eps0)
    result = SuperOperator.zeros(space)
    power = SuperOperator.identity(space)
    for k in range(order + 1):
        if k % 2 == 0:
            sign = (-1) ** (k // 2)
            result = result + (sign * scale**k / math.factorial(k)) * power
        power = total @ power
    return result
