"""Acceptance suite behind `reproduce-paper`.

Each group runs a set of exactly checkable claims at desk scale and reports
the measured value next to the expected one.
"""

from typing import Callable

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field
from rich.table import Table

from bifurcation.constants import BranchKind, LambdaConvention
from bifurcation.normal_form import (
    fold_normal_form,
    fold_params_from_levels,
    fold_params_from_normal_form,
    quadratic_roots,
)
from bifurcation.scan import lambda_grid, lambda_sweep, scan
from fock.operators import (
    build_harmonic_h,
    build_product_h,
    fock_projector,
    pure_state,
    random_operator,
)
from fock.schemas import FockSpace, OperatorMatrix
from fock.wavefunctions import overlap_matrix
from liouvillian.builders import (
    cosine_model,
    cosine_predicted_levels,
    fold_model,
    harmonic_model,
    lindblad_model,
    nlo_model,
    verify_generator,
)
from liouvillian.oracles import (
    cosine_series_superop,
    fold_first_friction_term,
    lindblad_dissipator_generator,
    resolve_nlo_gamma_sign,
)
from liouvillian.schemas import (
    CosineParams,
    FoldParams,
    LindbladParams,
    LiouvillianModel,
    NloParams,
)
from stationary.diagnostics import fock_scan, null_space, residual
from stationary.evolution import evolve
from superop.calculus import adjoint_superop, hs_inner, left_mult, right_mult
from superop.schemas import SuperOperator
from superop.spectral import (
    energy_function_superop,
    n_operator,
    n_operator_via_adjoint,
    polynomial_superop,
)

from .constants import ReproduceGroup

STATIONARY_TOL = 1e-10
NON_STATIONARY_FLOOR = 1e-4
SCAN_A = 3.0
SCAN_POINTS = 201


class CriterionResult(BaseModel):
    group: ReproduceGroup
    claim: str
    measured: str
    expected: str
    passed: bool


class ReproduceSummary(BaseModel):
    """Outcome of a reproduce-paper run."""

    convention: LambdaConvention
    results: list[CriterionResult] = Field(default_factory=list)
    discrepancies: list[CriterionResult] = Field(
        default_factory=list,
        description="Fold and scan claims that fail under the printed λ sign",
    )

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def failures(self) -> list[CriterionResult]:
        return [result for result in self.results if not result.passed]


def _below(group: ReproduceGroup, claim: str, value: float, limit: float) -> CriterionResult:
    return CriterionResult(
        group=group,
        claim=claim,
        measured=f"{value:.3e}",
        expected=f"< {limit:.0e}",
        passed=bool(value < limit),
    )


def _above(group: ReproduceGroup, claim: str, value: float, limit: float) -> CriterionResult:
    return CriterionResult(
        group=group,
        claim=claim,
        measured=f"{value:.3e}",
        expected=f"> {limit:.0e}",
        passed=bool(value > limit),
    )


def _equal(group: ReproduceGroup, claim: str, measured, expected) -> CriterionResult:
    return CriterionResult(
        group=group,
        claim=claim,
        measured=str(measured),
        expected=str(expected),
        passed=measured == expected,
    )


def _root_gap(left: list[float], right: list[float]) -> float:
    if len(left) != len(right):
        return float("inf")
    if not left:
        return 0.0
    return float(np.max(np.abs(np.subtract(left, right))))


def unit_space(dim: int) -> FockSpace:
    return FockSpace(dim=dim, hbar=1.0, mass=1.0, omega=1.0)


def conservation_presets(space: FockSpace) -> list[LiouvillianModel]:
    """One model per family with dissipation weak enough for t = 10 runs."""
    return [
        harmonic_model(space),
        nlo_model(space, NloParams.for_level(2, 1e-3, space)),
        cosine_model(space, CosineParams(eps0=space.quantum)),
        lindblad_model(space, LindbladParams(v=[[0.0, 1.0]])),
        fold_model(space, FoldParams(alpha0=6.75e-4, alpha1=-6e-4, alpha2=1e-4)),
    ]


def check_spectrum(convention: LambdaConvention, rng: np.random.Generator) -> list[CriterionResult]:
    group = ReproduceGroup.SPECTRUM
    space = unit_space(32)
    energies = np.array([0.5 * (2 * n + 1) for n in range(space.dim)])
    diagonal = build_harmonic_h(space)
    product = build_product_h(space)
    block = space.dim - 2
    overlaps = overlap_matrix(space, 10)
    return [
        _equal(
            group,
            "diagonal H has E_n = (2n+1)/2 exactly",
            float(np.max(np.abs(np.diag(diagonal.entries) - energies))),
            0.0,
        ),
        _below(
            group,
            "q/p-built H matches on leading dim-2 block (dim=32)",
            float(np.max(np.abs(product.leading_block(block) - diagonal.leading_block(block)))),
            1e-8,
        ),
        _below(
            group,
            "eigenfunctions are orthonormal for n <= 10",
            float(np.max(np.abs(overlaps - np.eye(11)))),
            1e-8,
        ),
    ]


def check_nlo(convention: LambdaConvention, rng: np.random.Generator) -> list[CriterionResult]:
    group = ReproduceGroup.NLO
    space = unit_space(16)
    results = []
    for n in range(6):
        params = NloParams.for_level(n, 0.1, space)
        model = nlo_model(space, params)
        results.append(
            _below(
                group,
                f"|{n}><{n}| stationary for delta = 2*beta*(2n+1)",
                residual(model, fock_projector(space, n)),
                STATIONARY_TOL,
            )
        )
        neighbours = [m for m in (n - 1, n + 1) if m >= 0]
        results.append(
            _above(
                group,
                f"neighbours {neighbours} of level {n} are not stationary",
                min(residual(model, fock_projector(space, m)) for m in neighbours),
                NON_STATIONARY_FLOOR,
            )
        )

    oracle_space = unit_space(8)
    params = NloParams.for_level(1, 0.1, oracle_space)
    sign, mismatch = resolve_nlo_gamma_sign(oracle_space, params, rng)
    results.append(_equal(group, "raw friction form matches Jordan form with -gamma*q^2", sign, -1))
    results.append(
        _below(group, "raw vs Jordan form mismatch at the resolved sign", mismatch[sign], 1e-10)
    )
    return results


def check_cosine(convention: LambdaConvention, rng: np.random.Generator) -> list[CriterionResult]:
    group = ReproduceGroup.COSINE
    space = unit_space(16)
    n_max = 11
    unit = fock_scan(cosine_model(space, CosineParams(eps0=1.0)), n_max, STATIONARY_TOL)
    third = fock_scan(cosine_model(space, CosineParams(eps0=3.0)), n_max, STATIONARY_TOL)
    predicted = cosine_predicted_levels(space, 1, n_max)
    energy_error = max(abs(level.energy - space.energy(level.n)) for level in predicted)
    return [
        _equal(group, "eps0 = 1: every n <= 11 stationary", unit.stationary_set, list(range(n_max + 1))),
        _equal(group, "eps0 = 3: stationary set for n <= 11", third.stationary_set, [1, 4, 7, 10]),
        _equal(
            group,
            "eps0 = 3: matches n = 2kl + k + l with l = 1",
            [level.n for level in predicted],
            third.stationary_set,
        ),
        _below(group, "predicted energies (2k+1)(2l+1)/2 lie on the spectrum", energy_error, 1e-12),
    ]


def check_lindblad(convention: LambdaConvention, rng: np.random.Generator) -> list[CriterionResult]:
    group = ReproduceGroup.LINDBLAD
    space = unit_space(16)
    params = LindbladParams(v=[[0.0, 1.0]])
    model = lindblad_model(space, params)
    worst = max(residual(model, fock_projector(space, n)) for n in range(space.dim))

    oracle = lindblad_dissipator_generator(space, params)

    rho0 = pure_state(space, [1.0, 0.0, 1.0])
    trace = evolve(model, rho0, 1.0, 1e-3, record_every=1000)
    decayed = abs(trace.final_state.entries[0, 2])
    expected = 0.5 * np.exp(-2.0)
    return [
        _below(group, "V = H: every Fock projector stationary", worst, 1e-12),
        _below(
            group,
            "spectral form matches explicit dissipator",
            model.generator.distance(oracle),
            1e-9,
        ),
        _below(
            group,
            "coherence (0,2) decays at rate (E0-E2)^2/2 = 2 by t = 1",
            float(abs(decayed - expected)),
            1e-6,
        ),
    ]


def check_fold(convention: LambdaConvention, rng: np.random.Generator) -> list[CriterionResult]:
    group = ReproduceGroup.FOLD
    space = unit_space(16)
    params = fold_params_from_levels(1, 4, space)
    normal_form = fold_normal_form(params, convention)
    results = [
        _equal(group, "levels (1, 4) give a = 3", normal_form.a, 3.0),
        _equal(group, "levels (1, 4) give lambda = 2.25", normal_form.lam, 2.25),
        _below(
            group,
            "normal-form roots agree with the quadratic",
            _root_gap(normal_form.roots(), quadratic_roots(params)),
            1e-9,
        ),
    ]

    worst = 0.0
    for n1 in range(11):
        for n2 in range(n1 + 1, 11):
            form = fold_normal_form(fold_params_from_levels(n1, n2, space), convention)
            worst = max(
                worst,
                abs(form.a - 0.5 * (n1 + n2 + 1)),
                abs(form.lam - 0.25 * (n1 - n2) ** 2),
            )
    results.append(
        _below(group, "a = (n1+n2+1)/2 and lambda = (n1-n2)^2/4 for n1 < n2 <= 10", worst, 1e-12)
    )

    report = fock_scan(fold_model(space, params), 8, STATIONARY_TOL)
    others = [level.residual for level in report.levels if level.n not in (1, 4)]
    results.append(_equal(group, "stationary set for n <= 8", report.stationary_set, [1, 4]))
    results.append(
        _above(group, "other levels n <= 8 are not stationary", min(others), NON_STATIONARY_FLOOR)
    )

    empty = fold_params_from_normal_form(3.0, -0.5, convention)
    empty_report = fock_scan(fold_model(space, empty), space.dim - 5, STATIONARY_TOL)
    results.append(_equal(group, "lambda = -0.5 has no stationary levels", empty_report.stationary_set, []))

    first_term = fold_first_friction_term(space, 6.75)
    constant = fold_model(space, FoldParams(alpha0=6.75, alpha1=0.0, alpha2=0.0))
    results.append(
        _below(
            group,
            "alpha0 term matches explicit (i/hbar)[q, p o rho]",
            constant.generator.distance(first_term),
            1e-10,
        )
    )
    return results


def _expected_hits(space: FockSpace, a: float, lambdas: np.ndarray) -> dict[int, list[int]]:
    """Grid indices where both roots of x² - λ sit on the spectrum."""
    expected = {}
    for n1 in range(space.dim):
        for n2 in range(n1 + 1, space.dim):
            e1, e2 = space.energy(n1), space.energy(n2)
            if abs(0.5 * (e1 + e2) - a) > 1e-12:
                continue
            lam = (0.5 * (e2 - e1)) ** 2
            matches = np.flatnonzero(np.abs(lambdas - lam) < 1e-12)
            for index in matches:
                expected[int(index)] = [n1, n2]
    return expected


def check_scan(convention: LambdaConvention, rng: np.random.Generator) -> list[CriterionResult]:
    group = ReproduceGroup.SCAN
    space = unit_space(16)
    lambdas = lambda_grid(-1.0, 1.0, SCAN_POINTS)
    grid = lambda_sweep(SCAN_A, lambdas, convention)
    result = scan(grid, space, convention=convention)

    wrong_counts = 0
    disagreements = 0
    for lam, params, record in zip(lambdas, grid, result.records):
        expected_count = 0 if lam < 0 else (1 if lam == 0 else 2)
        if record.root_count != expected_count:
            wrong_counts += 1
        if record.branch == BranchKind.TANGENCY:
            continue
        normal_roots = [r for r in (record.root_low, record.root_high) if r is not None]
        direct = quadratic_roots(params)
        if len(normal_roots) != len(direct) or not np.allclose(normal_roots, direct, atol=1e-9):
            disagreements += 1

    hits = {record.grid_index: record.stationary_levels for record in result.hits()}
    expected = _expected_hits(space, SCAN_A, lambdas)

    worst = 0.0
    for index, levels in hits.items():
        model = fold_model(space, grid[index])
        worst = max([worst] + [residual(model, fock_projector(space, n)) for n in levels])

    return [
        _equal(group, "root count 0 for lambda < 0, 2 for lambda > 0", wrong_counts, 0),
        _equal(group, "normal-form roots agree with the quadratic at every point", disagreements, 0),
        _equal(
            group,
            "Fock hits only at lambda = k^2/4 with both roots on the spectrum",
            {float(lambdas[i]): v for i, v in hits.items()},
            {float(lambdas[i]): v for i, v in expected.items()},
        ),
        _below(group, "hit levels are stationary for the generator", worst, STATIONARY_TOL),
    ]


def check_sign(
    convention: LambdaConvention, rng: np.random.Generator
) -> tuple[list[CriterionResult], list[CriterionResult]]:
    group = ReproduceGroup.SIGN
    outcomes = {}
    for candidate in LambdaConvention:
        outcomes[candidate] = check_fold(candidate, rng) + check_scan(candidate, rng)
    corrected = outcomes[LambdaConvention.CORRECTED]
    printed = outcomes[LambdaConvention.PRINTED]
    corrected_failed = sum(1 for r in corrected if not r.passed)
    printed_failed = [r for r in printed if not r.passed]
    results = [
        CriterionResult(
            group=group,
            claim="corrected lambda passes fold and scan claims",
            measured=f"{corrected_failed}/{len(corrected)} failed",
            expected="0 failed",
            passed=corrected_failed == 0,
        ),
        CriterionResult(
            group=group,
            claim="printed lambda fails fold and scan claims",
            measured=f"{len(printed_failed)}/{len(printed)} failed",
            expected=">= 1 failed",
            passed=len(printed_failed) > 0,
        ),
    ]
    return results, printed_failed


def check_conservation(
    convention: LambdaConvention, rng: np.random.Generator
) -> list[CriterionResult]:
    group = ReproduceGroup.CONSERVATION
    space = unit_space(10)
    rho0 = pure_state(space, [1.0, 1.0, 1.0])
    results = []
    for model in conservation_presets(space):
        trace = evolve(model, rho0, 10.0, 1e-3, record_every=500)
        results.append(
            _below(group, f"{model.kind.value}: |Tr rho - 1| over t <= 10", max(trace.trace_drift), 1e-9)
        )
        results.append(
            _below(
                group,
                f"{model.kind.value}: hermiticity drift over t <= 10",
                max(trace.hermiticity_drift),
                1e-9,
            )
        )
    return results


def _kernel_distance(operator: OperatorMatrix, basis: list[OperatorMatrix]) -> float:
    projection = OperatorMatrix.zeros(operator.space)
    for element in basis:
        projection = projection + hs_inner(element, operator) * element
    return (operator - projection).norm()


def check_kernel(convention: LambdaConvention, rng: np.random.Generator) -> list[CriterionResult]:
    group = ReproduceGroup.KERNEL
    harmonic = null_space(harmonic_model(unit_space(6)), 1e-9)
    results = [_equal(group, "harmonic kernel dimension at dim = 6", len(harmonic), 6)]

    space = unit_space(10)
    for model in conservation_presets(space):
        report = fock_scan(model, space.dim - 5, STATIONARY_TOL)
        basis = [element.operator for element in null_space(model, 1e-9)]
        worst_residual = 0.0
        results.append(
            _equal(
                group,
                f"{model.kind.value}: kernel dimension covers the stationary set",
                len(basis) >= len(report.stationary_set),
                True,
            )
        )
        worst_distance = 0.0
        for n in report.stationary_set:
            projector = fock_projector(space, n)
            worst_residual = max(worst_residual, residual(model, projector))
            worst_distance = max(worst_distance, _kernel_distance(projector, basis))
        label = f"{model.kind.value} {report.stationary_set}"
        results.append(_below(group, f"{label}: projector residuals", worst_residual, 1e-9))
        results.append(_below(group, f"{label}: projectors lie in the kernel", worst_distance, 1e-6))
    return results


def check_calculus(convention: LambdaConvention, rng: np.random.Generator) -> list[CriterionResult]:
    group = ReproduceGroup.CALCULUS
    space = unit_space(6)
    A = random_operator(space, rng)
    B = random_operator(space, rng)
    C = random_operator(space, rng)
    product_error = max(
        (left_mult(A).apply(C) - A @ C).norm(),
        (right_mult(A).apply(C) - C @ A).norm(),
        (left_mult(A) @ left_mult(B)).distance(left_mult(A @ B)),
        (right_mult(A) @ right_mult(B)).distance(right_mult(B @ A)),
        (left_mult(A) @ right_mult(B)).distance(right_mult(B) @ left_mult(A)),
    )

    size = space.dim**2
    S = SuperOperator(
        space=space,
        entries=rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size)),
    )
    adjoint_error = abs(hs_inner(A, S.apply(B)) - hs_inner(adjoint_superop(S).apply(A), B))

    H = build_harmonic_h(space)
    cosine = energy_function_superop(
        cosine_model(space, CosineParams(eps0=3.0)).n_funcs[0], H
    )
    series_error = cosine.distance(cosine_series_superop(space, 3.0, order=40))

    fold_params = fold_params_from_levels(1, 4, space)
    fold = fold_model(space, fold_params)
    polynomial_error = energy_function_superop(fold.n_funcs[0], H).distance(
        polynomial_superop(fold_params.coefficients(), H)
    )

    eigen_error = 0.0
    generator_error = 0.0
    for model in conservation_presets(space):
        for f in model.n_funcs:
            N = n_operator(f, H)
            via_adjoint = n_operator_via_adjoint(f, H)
            for n in range(space.dim):
                ket = np.zeros(space.dim)
                ket[n] = 1.0
                expected = np.conj(f(space.energy(n), space.energy(n))) * ket
                eigen_error = max(eigen_error, float(np.max(np.abs(N.entries @ ket - expected))))
            eigen_error = max(eigen_error, (N - via_adjoint).norm())
        check = verify_generator(model, rng, samples=10)
        generator_error = max(generator_error, check.max_trace, check.max_hermiticity)

    return [
        _below(group, "L/R product and commutation identities", product_error, 1e-10),
        _below(group, "adjoint identity (A|S B) = (S^+ A|B)", adjoint_error, 1e-10),
        _below(group, "spectral cosine vs order-40 series (eps0 = 3)", series_error, 1e-10),
        _below(group, "spectral polynomial vs Jordan powers", polynomial_error, 1e-10),
        _below(group, "N(H,H)|n> = N(E_n,E_n)|n> for every model", eigen_error, 1e-12),
        _below(group, "generators annihilate traces and keep Hermiticity", generator_error, 1e-10),
    ]


GROUP_CHECKS: dict[ReproduceGroup, Callable[..., list[CriterionResult]]] = {
    ReproduceGroup.SPECTRUM: check_spectrum,
    ReproduceGroup.NLO: check_nlo,
    ReproduceGroup.COSINE: check_cosine,
    ReproduceGroup.LINDBLAD: check_lindblad,
    ReproduceGroup.FOLD: check_fold,
    ReproduceGroup.SCAN: check_scan,
    ReproduceGroup.CONSERVATION: check_conservation,
    ReproduceGroup.KERNEL: check_kernel,
    ReproduceGroup.CALCULUS: check_calculus,
}


def run_reproduce(
    groups: list[ReproduceGroup],
    convention: LambdaConvention,
    rng: np.random.Generator,
) -> ReproduceSummary:
    summary = ReproduceSummary(convention=convention)
    for group in ReproduceGroup:
        if group not in groups:
            continue
        if group == ReproduceGroup.SIGN:
            results, discrepancies = check_sign(convention, rng)
            summary.discrepancies.extend(discrepancies)
        else:
            results = GROUP_CHECKS[group](convention, rng)
        failed = sum(1 for r in results if not r.passed)
        logger.info(f"{group.value}: {len(results) - failed}/{len(results)} claims hold")
        summary.results.extend(results)
    return summary


def summary_table(summary: ReproduceSummary) -> Table:
    table = Table(title=f"Acceptance claims (lambda convention: {summary.convention.value})")
    table.add_column("group")
    table.add_column("claim")
    table.add_column("measured", justify="right")
    table.add_column("expected", justify="right")
    table.add_column("result")
    for r in summary.results:
        table.add_row(
            r.group.value,
            r.claim,
            r.measured,
            r.expected,
            "[green]pass[/green]" if r.passed else "[red]FAIL[/red]",
        )
    return table


def discrepancy_table(summary: ReproduceSummary) -> Table:
    table = Table(title="Printed lambda sign discrepancies")
    table.add_column("group")
    table.add_column("claim")
    table.add_column("measured", justify="right")
    table.add_column("expected", justify="right")
    for r in summary.discrepancies:
        table.add_row(r.group.value, r.claim, r.measured, r.expected)
    return table
