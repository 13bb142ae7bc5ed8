from typing import Any, Callable, Mapping

from fock.schemas import FockSpace

from .builders import cosine_model, fold_model, harmonic_model, lindblad_model, nlo_model
from .constants import ModelKind
from .schemas import (
    CosineParams,
    FoldParams,
    HarmonicParams,
    LiouvillianModel,
    LindbladParams,
    ModelParams,
    NloParams,
)

PARAMS_BY_KIND: dict[ModelKind, type] = {
    ModelKind.HARMONIC: HarmonicParams,
    ModelKind.NLO: NloParams,
    ModelKind.COSINE: CosineParams,
    ModelKind.LINDBLAD: LindbladParams,
    ModelKind.FOLD: FoldParams,
}

BUILDERS: dict[ModelKind, Callable[..., LiouvillianModel]] = {
    ModelKind.HARMONIC: lambda space, params: harmonic_model(space),
    ModelKind.NLO: nlo_model,
    ModelKind.COSINE: cosine_model,
    ModelKind.LINDBLAD: lindblad_model,
    ModelKind.FOLD: fold_model,
}


def parse_params(kind: ModelKind, params: Mapping[str, Any]) -> ModelParams:
    """Validate a raw parameter mapping against the schema of its kind."""
    return PARAMS_BY_KIND[ModelKind(kind)].model_validate(dict(params))


def build_model(kind: ModelKind, space: FockSpace, params: ModelParams) -> LiouvillianModel:
    kind = ModelKind(kind)
    expected = PARAMS_BY_KIND[kind]
    if not isinstance(params, expected):
        params = parse_params(kind, params)
    return BUILDERS[kind](space, params)
