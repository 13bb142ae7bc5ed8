import math

import numpy as np
import pytest
from pydantic import ValidationError

from bifurcation.catastrophe import (
    catastrophe_from_polynomial,
    catastrophe_potential_eval,
    critical_points,
)
from bifurcation.constants import BranchKind, CatastropheFamily, LambdaConvention
from bifurcation.normal_form import (
    depressed_shift,
    fold_normal_form,
    fold_params_from_levels,
    fold_params_from_normal_form,
    quadratic_roots,
)
from bifurcation.potentials import potential_gradient, potential_reconstruct, potentiality_check
from bifurcation.scan import alpha_grid, lambda_grid, lambda_sweep, matching_levels, scan
from bifurcation.schemas import CatastrophePotential, FoldNormalForm, MultiN, PolynomialN
from liouvillian.schemas import FoldParams
from shared.constants import ExitCode
from shared.exceptions import QuantumException

LEVELS_ONE_AND_FOUR = FoldParams(alpha0=6.75, alpha1=-6.0, alpha2=1.0)


def test_normal_form_of_levels_one_and_four():
    normal_form = fold_normal_form(LEVELS_ONE_AND_FOUR)
    assert normal_form.a == 3.0
    assert normal_form.lam == 2.25
    assert normal_form.branch == BranchKind.PAIR
    assert normal_form.roots() == [1.5, 4.5]


def test_printed_convention_flips_lambda():
    normal_form = fold_normal_form(LEVELS_ONE_AND_FOUR, LambdaConvention.PRINTED)
    assert normal_form.lam == -2.25
    assert normal_form.branch == BranchKind.NONE
    assert normal_form.roots() == []
    assert quadratic_roots(LEVELS_ONE_AND_FOUR) != normal_form.roots()


def test_tangency_has_a_double_root():
    normal_form = FoldNormalForm(a=3.0, lam=0.0)
    assert normal_form.branch == BranchKind.TANGENCY
    assert normal_form.roots() == [3.0]
    assert FoldNormalForm(a=3.0, lam=-0.01).roots() == []


def test_normal_form_requires_quadratic():
    with pytest.raises(QuantumException) as e:
        fold_normal_form(FoldParams(alpha0=1.0, alpha1=1.0, alpha2=0.0))
    assert e.value.exit_code == ExitCode.CONFIG_ERROR


@pytest.mark.parametrize("convention", [LambdaConvention.CORRECTED, LambdaConvention.PRINTED])
def test_params_from_normal_form_invert(convention):
    params = fold_params_from_normal_form(3.0, 2.25, convention)
    normal_form = fold_normal_form(params, convention)
    assert normal_form.a == 3.0
    assert normal_form.lam == 2.25


def test_every_level_pair_is_recovered(space16):
    for n1 in range(10):
        for n2 in range(n1 + 1, 11):
            params = fold_params_from_levels(n1, n2, space16)
            roots = fold_normal_form(params).roots()
            assert matching_levels(roots, space16, 1e-9) == [n1, n2]
            assert max(abs(x - y) for x, y in zip(quadratic_roots(params), roots)) < 1e-9


def test_levels_must_differ(space16):
    with pytest.raises(QuantumException):
        fold_params_from_levels(2, 2, space16)
    with pytest.raises(QuantumException):
        fold_params_from_levels(-1, 2, space16)


def test_quadratic_roots():
    assert max(abs(x - y) for x, y in zip(quadratic_roots(LEVELS_ONE_AND_FOUR), [1.5, 4.5])) < 1e-12
    assert quadratic_roots(FoldParams(alpha0=1.0, alpha1=0.0, alpha2=1.0)) == []


def test_depressed_shift():
    a_shift, shifted = depressed_shift(PolynomialN(coeffs=[6.75, -6.0, 1.0]))
    assert a_shift == 3.0
    assert np.allclose(shifted.coeffs, [-2.25, 0.0, 1.0], atol=1e-12)

    a_shift, shifted = depressed_shift(PolynomialN(coeffs=[0.0, 0.0, 3.0, 1.0]))
    assert a_shift == -1.0
    assert abs(shifted.coeffs[2]) < 1e-12
    assert shifted.degree == 3


def test_depressed_shift_needs_degree_two():
    with pytest.raises(QuantumException):
        depressed_shift(PolynomialN(coeffs=[1.0, 2.0]))


def test_cusp_critical_points():
    cusp = CatastrophePotential(family=CatastropheFamily.A_PLUS, order=3, coeffs=[0.0, -2.0])
    points = critical_points(cusp)
    assert len(points) == 3
    assert np.allclose([p[0] for p in points], [-1.0, 0.0, 1.0], atol=1e-9)
    assert catastrophe_potential_eval(cusp, [1.0]) == -1.0


def test_fold_potential_recovers_levels():
    a_shift, potential = catastrophe_from_polynomial(PolynomialN(coeffs=[6.75, -6.0, 1.0]))
    assert potential.family == CatastropheFamily.A_PLUS
    assert potential.order == 2
    assert potential.coeffs == [-6.75]
    energies = sorted(p[0] + a_shift for p in critical_points(potential))
    assert np.allclose(energies, [1.5, 4.5], atol=1e-9)


def test_negative_leading_coefficient_gives_minus_family():
    _, potential = catastrophe_from_polynomial(PolynomialN(coeffs=[-6.75, 6.0, -1.0]))
    assert potential.family == CatastropheFamily.A_MINUS


def test_umbilic_critical_points():
    potential = CatastrophePotential(
        family=CatastropheFamily.D_PLUS, order=4, coeffs=[-3.0, 0.0, 0.0]
    )
    points = critical_points(potential)
    expected = [(-math.sqrt(3.0), 0.0), (0.0, -1.0), (0.0, 1.0), (math.sqrt(3.0), 0.0)]
    assert len(points) == 4
    for point, target in zip(points, expected):
        assert np.allclose(point, target, atol=1e-7)


def test_quadratic_form_adds_coordinates():
    potential = CatastrophePotential(
        family=CatastropheFamily.A_PLUS, order=2, coeffs=[1.0], signature=[1, -1]
    )
    assert potential.variables == 3
    assert catastrophe_potential_eval(potential, [1.0, 2.0, 3.0]) == 1.0 + 1.0 + 4.0 - 9.0
    with pytest.raises(QuantumException):
        catastrophe_potential_eval(potential, [1.0])
    points = critical_points(potential, box=(-3.0, 3.0))
    assert points == []


def test_catastrophe_coefficient_count_is_validated():
    with pytest.raises(ValidationError):
        CatastrophePotential(family=CatastropheFamily.A_PLUS, order=3, coeffs=[1.0])
    with pytest.raises(ValidationError):
        CatastrophePotential(family=CatastropheFamily.E7, order=2, coeffs=[0.0] * 6)
    with pytest.raises(ValidationError):
        CatastrophePotential(
            family=CatastropheFamily.E6_PLUS, coeffs=[0.0] * 5, signature=[2]
        )
    CatastrophePotential(family=CatastropheFamily.E8, coeffs=[0.0] * 7)


def test_critical_points_rejects_empty_box():
    cusp = CatastrophePotential(family=CatastropheFamily.A_PLUS, order=3, coeffs=[0.0, -2.0])
    with pytest.raises(QuantumException):
        critical_points(cusp, box=(1.0, -1.0))


def test_potential_of_a_product():
    funcs = [np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]])]
    multi = MultiN(s=2, funcs=funcs)
    assert potentiality_check(multi) == (True, 0.0)
    potential = potential_reconstruct(multi)
    assert potential[1, 1] == 1.0
    assert np.sum(np.abs(potential)) == 1.0
    gradient = potential_gradient(potential)
    point = [0.7, -1.3]
    for k in range(2):
        value = np.polynomial.polynomial.polyval2d(point[0], point[1], gradient[k])
        assert abs(value - multi.evaluate(point)[k]) < 1e-12


def test_rotation_field_is_not_potential():
    funcs = [np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [-1.0, 0.0]])]
    multi = MultiN(s=2, funcs=funcs)
    potential, asymmetry = potentiality_check(multi)
    assert not potential
    assert asymmetry == 2.0
    with pytest.raises(QuantumException):
        potential_reconstruct(multi)


def test_single_variable_potential():
    multi = MultiN.from_polynomial(PolynomialN(coeffs=[6.75, -6.0, 1.0]))
    potential = potential_reconstruct(multi)
    assert np.allclose(potential, [0.0, 6.75, -3.0, 1.0 / 3.0])


def test_lambda_sweep_hits(space16):
    grid = lambda_sweep(3.0, lambda_grid(-1.0, 1.0, 201))
    result = scan(grid, space16)
    records = result.records
    assert [record.grid_index for record in records] == list(range(201))
    assert all(record.root_count == 0 for record in records[:100])
    assert records[100].branch == BranchKind.TANGENCY
    assert records[100].root_low == records[100].root_high == 3.0
    assert all(record.root_count == 2 for record in records[101:])
    hits = result.hits()
    assert [record.grid_index for record in hits] == [125]
    assert hits[0].stationary_levels == [2, 3]
    assert hits[0].root_low == 2.5 and hits[0].root_high == 3.5


def test_scan_is_independent_of_workers(space16):
    grid = lambda_sweep(3.0, lambda_grid(-1.0, 1.0, 201))
    serial = scan(grid, space16)
    threaded = scan(grid, space16, workers=4)
    assert serial.model_dump() == threaded.model_dump()


def test_printed_sweep_keeps_its_own_lambda(space16):
    grid = lambda_sweep(3.0, lambda_grid(-1.0, 1.0, 201), LambdaConvention.PRINTED)
    result = scan(grid, space16, convention=LambdaConvention.PRINTED)
    assert [record.grid_index for record in result.hits()] == [125]
    record = result.records[125]
    assert record.lam == 0.25
    assert record.alpha0 == 9.25


def test_alpha_grid_order_and_degenerate_points(space16):
    grid = alpha_grid([1.0, 2.0], [0.0], [1.0, 0.0])
    assert [(p.alpha0, p.alpha2) for p in grid] == [(1.0, 1.0), (1.0, 0.0), (2.0, 1.0), (2.0, 0.0)]
    records = scan(grid, space16).records
    assert records[1].a is None
    assert records[1].branch == BranchKind.NONE
    assert records[0].branch == BranchKind.NONE


def test_matching_levels_ignores_out_of_range_roots(space4):
    assert matching_levels([-0.5, 2.5, 100.5], space4, 1e-9) == [2]
    assert matching_levels([2.5 + 1e-6], space4, 1e-9) == []


def test_grid_validation(space16):
    with pytest.raises(QuantumException):
        lambda_grid(0.0, 1.0, 0)
    assert lambda_grid(0.3, 1.0, 1).tolist() == [0.3]
    with pytest.raises(QuantumException):
        scan([], space16)


def test_small_shift_sweep_has_no_hits(space16):
    grid = lambda_sweep(0.1, lambda_grid(-0.1, 0.1, 21))
    result = scan(grid, space16)
    assert result.hits() == []
    assert all(record.root_high is None or record.root_high < 0.5 for record in result.records)


def test_linear_grid_point_still_matches_levels(space16):
    records = scan(alpha_grid([-2.5], [1.0], [0.0]), space16).records
    assert records[0].stationary_levels == [2]
    assert records[0].root_low == records[0].root_high == 2.5
    assert records[0].a is None and records[0].lam is None
    assert records[0].branch == BranchKind.NONE


def test_vanishing_polynomial_keeps_every_level(space16):
    records = scan(alpha_grid([0.0], [0.0], [0.0]), space16).records
    assert records[0].stationary_levels == list(range(16))
    assert records[0].root_low is None
