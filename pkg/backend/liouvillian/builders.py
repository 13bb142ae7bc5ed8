"""Generators Λ of the form -(i/ħ)[H, ·] + Σ_k F_k N_k(L_H, R_H).

H is the exactly diagonal oscillator Hamiltonian, so every N_k is built
spectrally. Friction operators F_k come from truncated q and p.
"""

from typing import Optional

import numpy as np
from loguru import logger

from fock.operators import build_canonical_ops, build_harmonic_h, random_density_matrix
from fock.schemas import EnergyLevel, FockSpace
from shared.exceptions import config_error
from superop.calculus import commutator_superop, jordan_superop
from superop.schemas import EnergyFunction, SuperOperator
from superop.spectral import energy_function_superop

from .constants import DEFAULT_VERIFY_SAMPLES, NLO_GAMMA_TOL, ModelKind
from .schemas import (
    CosineParams,
    FoldParams,
    GeneratorCheck,
    HarmonicParams,
    LiouvillianModel,
    LindbladParams,
    NloParams,
)


def hamiltonian_part(space: FockSpace) -> SuperOperator:
    """-(i/ħ)(L_H - R_H) with diagonal H."""
    H = build_harmonic_h(space)
    return (-1j / space.hbar) * commutator_superop(H)


def harmonic_model(space: FockSpace) -> LiouvillianModel:
    return LiouvillianModel(
        kind=ModelKind.HARMONIC,
        space=space,
        params=HarmonicParams(),
        generator=hamiltonian_part(space),
    )


def nlo_energy_function(space: FockSpace, params: NloParams) -> EnergyFunction:
    offset = params.energy_offset(space)
    return EnergyFunction(
        name=f"nlo: (a+b)/2 - {offset:.6g}",
        evaluator=lambda a, b: 0.5 * (a + b) - offset,
    )


def nlo_model(space: FockSpace, params: NloParams) -> LiouvillianModel:
    """Friction form with F = (2imβ/ħ)(L_q² - R_q²) and N = ½(L_H + R_H) - Δ/(dβ).

    Requires γ = βm²ω², under which the Jordan factor collapses to H.
    """
    if params.beta == 0:
        raise config_error("nlo model requires beta != 0")
    expected_gamma = params.beta * space.mass**2 * space.omega**2
    if abs(params.gamma - expected_gamma) > NLO_GAMMA_TOL:
        raise config_error(
            f"nlo model requires gamma = beta*m^2*omega^2 = {expected_gamma!r}, got {params.gamma!r}"
        )

    q, _ = build_canonical_ops(space)
    H = build_harmonic_h(space)
    f = nlo_energy_function(space, params)
    friction = (2j * space.mass * params.beta / space.hbar) * commutator_superop(q @ q)
    generator = hamiltonian_part(space) + friction @ energy_function_superop(f, H)
    logger.debug(
        f"Built nlo model: delta={params.delta(space)}, offset={params.energy_offset(space)}"
    )
    return LiouvillianModel(
        kind=ModelKind.NLO, space=space, params=params, generator=generator, n_funcs=[f]
    )


def cosine_energy_function(params: CosineParams) -> EnergyFunction:
    eps0 = params.eps0
    return EnergyFunction(
        name=f"cos(pi(a+b)/(2*{eps0:g}))",
        evaluator=lambda a, b: np.cos(np.pi * (a + b) / (2.0 * eps0)),
    )


def cosine_model(space: FockSpace, params: CosineParams) -> LiouvillianModel:
    q, _ = build_canonical_ops(space)
    H = build_harmonic_h(space)
    f = cosine_energy_function(params)
    friction = (1j / space.hbar) * commutator_superop(q)
    generator = hamiltonian_part(space) + friction @ energy_function_superop(f, H)
    return LiouvillianModel(
        kind=ModelKind.COSINE, space=space, params=params, generator=generator, n_funcs=[f]
    )


def lindblad_energy_function(space: FockSpace, coeffs: np.ndarray, k: int) -> EnergyFunction:
    """(1/2ħ)(2V(a)V*(b) - |V(a)|² - |V(b)|²) for the channel V = Σ v_n Hⁿ."""
    hbar = space.hbar

    def evaluator(a, b):
        va = np.polynomial.polynomial.polyval(a, coeffs)
        vb = np.polynomial.polynomial.polyval(b, coeffs)
        return (2.0 * va * np.conj(vb) - np.abs(va) ** 2 - np.abs(vb) ** 2) / (2.0 * hbar)

    return EnergyFunction(name=f"lindblad channel {k}", evaluator=evaluator)


def lindblad_model(space: FockSpace, params: LindbladParams) -> LiouvillianModel:
    """Dissipators with V_k polynomial in H, each acting elementwise (F_k = Id)."""
    H = build_harmonic_h(space)
    n_funcs = [
        lindblad_energy_function(space, coeffs, k)
        for k, coeffs in enumerate(params.coefficients())
    ]
    generator = hamiltonian_part(space)
    for f in n_funcs:
        generator = generator + energy_function_superop(f, H)
    return LiouvillianModel(
        kind=ModelKind.LINDBLAD,
        space=space,
        params=params,
        generator=generator,
        n_funcs=n_funcs,
    )


def fold_friction(space: FockSpace) -> SuperOperator:
    """F = (i/ħ)(L_q - R_q)·½(L_p + R_p), i.e. ρ ↦ (i/ħ)[q, p∘ρ]."""
    q, p = build_canonical_ops(space)
    return (1j / space.hbar) * (commutator_superop(q) @ jordan_superop(p))


def fold_model(space: FockSpace, params: FoldParams) -> LiouvillianModel:
    H = build_harmonic_h(space)
    f = EnergyFunction.jordan_polynomial(params.coefficients(), name="fold quadratic")
    generator = hamiltonian_part(space) + fold_friction(space) @ energy_function_superop(f, H)
    return LiouvillianModel(
        kind=ModelKind.FOLD, space=space, params=params, generator=generator, n_funcs=[f]
    )


def n_of_e(model: LiouvillianModel, energy: float) -> list[float]:
    """Every N_k(E, E); stationarity of |n><n| needs all of them to vanish."""
    return [complex(f(energy, energy)).real for f in model.n_funcs]


def n_of_e_spectrum(model: LiouvillianModel, n_max: Optional[int] = None) -> np.ndarray:
    """Array of shape (len(n_funcs), n_max + 1) with N_k(E_n, E_n)."""
    n_max = model.space.dim - 1 if n_max is None else n_max
    energies = np.array([model.space.energy(n) for n in range(n_max + 1)])
    if not model.n_funcs:
        return np.zeros((0, energies.size))
    return np.stack([np.real(f(energies, energies)) for f in model.n_funcs])


def function_zero_set(model: LiouvillianModel, n_max: int, tol: float) -> list[int]:
    """Levels n ≤ n_max where every N_k(E_n, E_n) is below tol in magnitude."""
    values = n_of_e_spectrum(model, n_max)
    return [n for n in range(n_max + 1) if np.all(np.abs(values[:, n]) < tol)]


def cosine_predicted_levels(space: FockSpace, l: int, n_max: int) -> list[EnergyLevel]:
    """Stationary levels n = 2kl + k + l for ε₀ = ħω(2l + 1).

    Their energies are (ħω/2)(2k + 1)(2l + 1).
    """
    if l < 0:
        raise config_error(f"Family index l must be nonnegative, got {l}")
    levels = []
    k = 0
    while (n := 2 * k * l + k + l) <= n_max:
        energy = 0.5 * space.quantum * (2 * k + 1) * (2 * l + 1)
        levels.append(EnergyLevel(n=n, energy=energy))
        k += 1
    return levels


def verify_generator(
    model: LiouvillianModel,
    rng: np.random.Generator,
    samples: int = DEFAULT_VERIFY_SAMPLES,
) -> GeneratorCheck:
    """Measure |Tr(Λρ)| and ‖Λρ - (Λρ)†‖ over random states."""
    max_trace = 0.0
    max_hermiticity = 0.0
    for _ in range(samples):
        rho = random_density_matrix(model.space, rng)
        out = model.generator.apply(rho)
        max_trace = max(max_trace, abs(out.trace()))
        max_hermiticity = max(max_hermiticity, out.hermiticity_error())
    logger.debug(
        f"{model.kind.value}: max |Tr(L rho)| = {max_trace:.3e}, "
        f"max hermiticity error = {max_hermiticity:.3e}"
    )
    return GeneratorCheck(
        samples=samples, max_trace=max_trace, max_hermiticity=max_hermiticity
    )
