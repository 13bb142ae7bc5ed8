import numpy as np
import pytest
from pydantic import ValidationError

from fock.operators import fock_projector, maximally_mixed
from fock.schemas import FockSpace, OperatorMatrix
from liouvillian.builders import (
    cosine_model,
    cosine_predicted_levels,
    fold_model,
    harmonic_model,
    lindblad_model,
    n_of_e,
    n_of_e_spectrum,
    nlo_model,
    verify_generator,
)
from liouvillian.constants import ModelKind
from liouvillian.factory import build_model, parse_params
from liouvillian.oracles import (
    fold_first_friction_term,
    lindblad_dissipator_generator,
    nlo_jordan_generator,
    nlo_raw_generator,
    resolve_nlo_gamma_sign,
)
from liouvillian.schemas import CosineParams, FoldParams, LindbladParams, NloParams
from shared.constants import ExitCode
from shared.exceptions import QuantumException
from stationary.diagnostics import residual


def _all_models(space: FockSpace) -> list:
    return [
        harmonic_model(space),
        nlo_model(space, NloParams.for_level(2, 0.1, space)),
        cosine_model(space, CosineParams(eps0=1.0)),
        lindblad_model(space, LindbladParams(v=[[0.0, 1.0], [0.5, 0.0, [0.0, 0.2]]])),
        fold_model(space, FoldParams(alpha0=6.75, alpha1=-6.0, alpha2=1.0)),
    ]


def test_harmonic_generator(space8):
    model = harmonic_model(space8)
    assert model.n_funcs == []
    for n in range(space8.dim):
        assert residual(model, fock_projector(space8, n)) < 1e-13
    coherence = np.zeros((8, 8))
    coherence[0, 1] = 1.0
    out = model.generator.apply(OperatorMatrix(space=space8, entries=coherence))
    assert abs(out.entries[0, 1] - (-1j) * (0.5 - 1.5)) < 1e-15


def test_generators_preserve_trace_and_hermiticity(space8, rng):
    for model in _all_models(space8):
        check = verify_generator(model, rng, samples=50)
        assert check.max_trace < 1e-11, model.kind
        assert check.max_hermiticity < 1e-11, model.kind


def test_nlo_level_two_is_stationary():
    space = FockSpace(dim=10)
    params = NloParams.for_level(2, 0.1, space)
    assert abs(params.delta(space) - 1.0) < 1e-14
    model = nlo_model(space, params)
    assert residual(model, fock_projector(space, 2)) < 1e-10
    assert residual(model, fock_projector(space, 3)) > 1e-3
    assert abs(n_of_e(model, 2.5)[0]) < 1e-14


def test_nlo_without_offset_has_no_stationary_level(space16):
    params = NloParams(beta=0.1, Omega=1.0, gamma=0.1)
    model = nlo_model(space16, params)
    values = n_of_e_spectrum(model, space16.dim - 5)
    assert np.all(values > 0)
    assert all(residual(model, fock_projector(space16, n)) > 1e-6 for n in range(12))


def test_nlo_rejects_inconsistent_gamma(space8):
    with pytest.raises(QuantumException) as e:
        nlo_model(space8, NloParams(beta=0.1, Omega=1.2, gamma=0.2))
    assert e.value.exit_code == ExitCode.CONFIG_ERROR


def test_nlo_rejects_zero_beta(space8):
    with pytest.raises(QuantumException):
        nlo_model(space8, NloParams(beta=0.0, Omega=1.0, gamma=0.0))


def test_nlo_alternative_divisor_moves_the_level(space16):
    params = NloParams.for_level(2, 0.1, space16).model_copy(update={"delta_divisor": 2})
    model = nlo_model(space16, params)
    assert residual(model, fock_projector(space16, 2)) > 1e-4
    assert abs(n_of_e(model, 5.0)[0]) < 1e-12


def test_nlo_raw_form_needs_negative_gamma_sign(space8, rng):
    params = NloParams.for_level(1, 0.1, space8)
    sign, mismatch = resolve_nlo_gamma_sign(space8, params, rng)
    assert sign == -1
    assert mismatch[-1] < 1e-10
    assert mismatch[1] > 1e-4
    raw = nlo_raw_generator(space8, params)
    assert raw.distance(nlo_jordan_generator(space8, params, -1)) < 1e-10


def test_nlo_jordan_generator_rejects_bad_sign(space8):
    with pytest.raises(QuantumException):
        nlo_jordan_generator(space8, NloParams.for_level(1, 0.1, space8), 0)


def test_cosine_unit_scale_keeps_every_level(space16):
    model = cosine_model(space16, CosineParams(eps0=1.0))
    for n in range(space16.dim - 3):
        assert residual(model, fock_projector(space16, n)) < 1e-10
    assert abs(n_of_e(model, 0.5)[0]) < 1e-15


def test_cosine_third_scale_levels(space16):
    model = cosine_model(space16, CosineParams(eps0=3.0))
    stationary = [n for n in range(11) if residual(model, fock_projector(space16, n)) < 1e-10]
    assert stationary == [1, 4, 7, 10]
    predicted = cosine_predicted_levels(space16, 1, 10)
    assert [level.n for level in predicted] == stationary
    assert predicted[1].energy == 4.5 == space16.energy(4)


def test_cosine_params_require_positive_scale():
    with pytest.raises(ValidationError):
        CosineParams(eps0=0.0)


def test_lindblad_projectors_are_stationary(space16):
    model = lindblad_model(space16, LindbladParams(v=[[0.0, 1.0]]))
    for n in range(space16.dim):
        assert residual(model, fock_projector(space16, n)) < 1e-13


def test_lindblad_matches_explicit_dissipator(rng):
    space = FockSpace(dim=6)
    params = LindbladParams(v=[[0.2, 1.0], [[0.0, 0.3], 0.0, 0.1]])
    model = lindblad_model(space, params)
    oracle = lindblad_dissipator_generator(space, params)
    for _ in range(5):
        rho = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        rho = OperatorMatrix(space=space, entries=rho + rho.conj().T)
        assert (model.generator.apply(rho) - oracle.apply(rho)).norm() < 1e-11


def test_lindblad_coherence_rate(space8):
    model = lindblad_model(space8, LindbladParams(v=[[0.0, 1.0]]))
    coherence = np.zeros((8, 8))
    coherence[0, 2] = 1.0
    out = model.generator.apply(OperatorMatrix(space=space8, entries=coherence))
    assert abs(out.entries[0, 2] - (-2.0 + 2.0j)) < 1e-13


def test_lindblad_params_validation():
    with pytest.raises(ValidationError):
        LindbladParams(v=[[0.0, 0.0]])
    with pytest.raises(ValidationError):
        LindbladParams(v=[[]])
    with pytest.raises(ValidationError):
        LindbladParams(v=[[float("nan")]])
    params = LindbladParams(v=[[1, 2.5j, [0.5, -0.5]]])
    assert np.array_equal(params.coefficients()[0], np.array([1.0, 2.5j, 0.5 - 0.5j]))


def test_fold_levels_one_and_four(space16):
    model = fold_model(space16, FoldParams(alpha0=6.75, alpha1=-6.0, alpha2=1.0))
    for n in range(7):
        value = residual(model, fock_projector(space16, n))
        if n in (1, 4):
            assert value < 1e-10
        else:
            assert value > 1e-4
    assert n_of_e(model, 1.5) == [0.0]


def test_fold_without_roots(space16):
    model = fold_model(space16, FoldParams(alpha0=1.0, alpha1=0.0, alpha2=1.0))
    assert all(residual(model, fock_projector(space16, n)) > 1e-4 for n in range(14))
    assert residual(model, maximally_mixed(space16)) > 0


def test_fold_linear_model_is_constructible(space8):
    model = fold_model(space8, FoldParams(alpha0=-2.5, alpha1=1.0, alpha2=0.0))
    assert residual(model, fock_projector(space8, 2)) < 1e-12


def test_fold_constant_term_matches_explicit_products(space8):
    model = fold_model(space8, FoldParams(alpha0=0.7, alpha1=0.0, alpha2=0.0))
    assert model.generator.distance(fold_first_friction_term(space8, 0.7)) < 1e-12


def test_factory_builds_from_raw_mapping(space8):
    params = parse_params(ModelKind.COSINE, {"eps0": 2.0})
    model = build_model(ModelKind.COSINE, space8, params)
    assert model.kind == ModelKind.COSINE
    assert model.model_id == "cosine(eps0=2.0)"
    assert build_model("harmonic", space8, {}).model_id == "harmonic"
    with pytest.raises(ValidationError):
        parse_params(ModelKind.FOLD, {"alpha0": 1.0, "alpha1": 0.0, "alpha2": 1.0, "beta": 1.0})
