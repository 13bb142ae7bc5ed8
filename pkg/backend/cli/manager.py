import json
import sys
from pathlib import Path
from typing import Any, Optional

import numpy as np
from loguru import logger
from pydantic import ValidationError

from bifurcation.constants import LambdaConvention
from bifurcation.scan import alpha_grid, lambda_grid, lambda_sweep, scan
from bifurcation.schemas import ScanResult
from fock.operators import fock_projector, maximally_mixed, pure_state, random_density_matrix
from fock.schemas import DensityMatrix, FockSpace
from liouvillian.constants import ModelKind
from liouvillian.factory import build_model
from liouvillian.schemas import LiouvillianModel
from settings.app_settings import AppSettings
from shared.constants import OutputFormat
from shared.exceptions import config_error
from shared.formatting import render_csv, render_json
from stationary.diagnostics import count_zero_eigenvalues, fock_scan, null_space, spectrum
from stationary.evolution import evolve
from stationary.schemas import EvolutionTrace, KernelElement, StationarityReport

from .constants import CONFIG_STDIN, InitialStateKind, ReproduceGroup, TaskKind
from .reproduce import ReproduceSummary, run_reproduce
from .schemas import (
    ComplexValue,
    EvolutionDocument,
    KernelRow,
    NullSpaceDocument,
    RunConfig,
    SpectrumDocument,
)

REPORT_HEADER = ["n", "energy", "residual", "stationary"]
SCAN_HEADER = [
    "grid_index",
    "alpha0",
    "alpha1",
    "alpha2",
    "a",
    "lambda",
    "root_low",
    "root_high",
    "stationary_levels",
    "branch",
]
EVOLVE_HEADER = ["time", "trace_drift", "hermiticity_drift", "min_eigenvalue", "residual"]
NULLSPACE_HEADER = ["index", "residual", "hermitian"]
SPECTRUM_HEADER = ["index", "real", "imag"]


def _merge(base: dict[str, Any], override: dict[str, Any]) -> dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _validation_message(e: ValidationError) -> str:
    parts = []
    for error in e.errors():
        location = ".".join(str(item) for item in error["loc"])
        parts.append(f"{location}: {error['msg']}" if location else error["msg"])
    return "; ".join(parts)


class QuantumManager:
    """Runs CLI tasks: builds models from a RunConfig and renders their results."""

    def __init__(self, app_settings: AppSettings):
        self.settings = app_settings

    def _defaults(self) -> dict[str, Any]:
        return {
            "space": {
                "dim": self.settings.dim,
                "hbar": self.settings.hbar,
                "mass": self.settings.mass,
                "omega": self.settings.omega,
            },
            "task": {
                "tol": self.settings.stationary_tol,
                "svd_tol": self.settings.svd_tol,
                "match_tol": self.settings.match_tol,
                "dt": self.settings.evolve_dt,
            },
            "workers": self.settings.workers,
        }

    def _read_document(self, source: Optional[str]) -> dict[str, Any]:
        if source is None:
            return {}
        try:
            if source == CONFIG_STDIN:
                text = sys.stdin.read()
            else:
                text = Path(source).read_text(encoding="utf-8")
        except OSError as e:
            raise config_error(f"Cannot read config {source}: {e}")
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise config_error(f"Config is not valid JSON: {e}")
        if not isinstance(document, dict):
            raise config_error("Config document must be a JSON object")
        return document

    def load_config(
        self, task: TaskKind, source: Optional[str] = None, **overrides: Any
    ) -> RunConfig:
        """Settings defaults, then the JSON document, then command-line flags."""
        document = _merge(self._defaults(), self._read_document(source))
        flags: dict[str, Any] = {"task": {"kind": task.value}}
        space_flags = {"dim": overrides.pop("dim", None)}
        output_flags = {
            "format": overrides.pop("format", None),
            "path": overrides.pop("out", None),
        }
        for key in ("seed", "workers"):
            value = overrides.pop(key, None)
            if value is not None:
                flags[key] = value
        for key, value in overrides.items():
            if value is not None:
                flags["task"][key] = value
        flags["space"] = {k: v for k, v in space_flags.items() if v is not None}
        flags["output"] = {k: v for k, v in output_flags.items() if v is not None}
        document = _merge(document, flags)

        try:
            config = RunConfig.model_validate(document)
        except ValidationError as e:
            raise config_error(f"Invalid config: {_validation_message(e)}")
        logger.debug(f"Loaded {task.value} config with dim={config.space.dim}")
        return config

    def _space(self, config: RunConfig) -> FockSpace:
        try:
            return config.space.to_space()
        except ValidationError as e:
            raise config_error(f"Invalid space: {_validation_message(e)}")

    def _model(self, config: RunConfig) -> LiouvillianModel:
        if config.model is None:
            raise config_error(f"Task {config.task.kind.value} needs a model block")
        return build_model(config.model.kind, self._space(config), config.model.parsed)

    def _initial_state(self, config: RunConfig, space: FockSpace) -> DensityMatrix:
        block = config.task.initial_state
        if block.kind == InitialStateKind.FOCK:
            if block.n >= space.dim:
                raise config_error(f"Initial level {block.n} outside dim={space.dim}")
            return fock_projector(space, block.n)
        if block.kind == InitialStateKind.SUPERPOSITION:
            return pure_state(space, block.amplitudes)
        if block.kind == InitialStateKind.MAXIMALLY_MIXED:
            return maximally_mixed(space)
        return random_density_matrix(space, np.random.default_rng(config.seed))

    def report(self, config: RunConfig) -> str:
        model = self._model(config)
        result = fock_scan(model, config.n_max, config.task.tol, config.workers)
        return self.render_report(result, config.output.format)

    def render_report(self, result: StationarityReport, fmt: OutputFormat) -> str:
        if fmt == OutputFormat.JSON:
            return render_json(result)
        rows = [
            [level.n, level.energy, level.residual, level.stationary]
            for level in result.levels
        ]
        return render_csv(REPORT_HEADER, rows)

    def scan(self, config: RunConfig) -> str:
        if config.model is not None and config.model.kind != ModelKind.FOLD:
            raise config_error(
                f"Scans need the fold model family, got {config.model.kind.value}"
            )
        if config.model is not None and config.model.params:
            raise config_error(
                "Scan grids set the fold coefficients; drop the model params block"
            )
        grid_block = config.task.grid
        if grid_block is None:
            raise config_error("Scan task needs a grid block")
        if grid_block.lambda_grid is not None:
            lam = grid_block.lambda_grid
            grid = lambda_sweep(
                lam.a, lambda_grid(lam.start, lam.stop, lam.num), config.task.convention
            )
        else:
            alpha = grid_block.alpha
            grid = alpha_grid(alpha.alpha0, alpha.alpha1, alpha.alpha2)
        result = scan(
            grid,
            self._space(config),
            config.task.match_tol,
            config.task.convention,
            config.workers,
        )
        return self.render_scan(result, config.output.format)

    def render_scan(self, result: ScanResult, fmt: OutputFormat) -> str:
        if fmt == OutputFormat.JSON:
            return render_json(result)
        rows = [
            [
                r.grid_index,
                r.alpha0,
                r.alpha1,
                r.alpha2,
                r.a,
                r.lam,
                r.root_low,
                r.root_high,
                r.stationary_levels,
                r.branch,
            ]
            for r in result.records
        ]
        return render_csv(SCAN_HEADER, rows)

    def evolve(self, config: RunConfig) -> str:
        model = self._model(config)
        rho0 = self._initial_state(config, model.space)
        task = config.task
        trace = evolve(model, rho0, task.t_final, task.dt, task.record_every, task.cross_check)
        return self.render_evolution(model, trace, config.output.format)

    def render_evolution(
        self, model: LiouvillianModel, trace: EvolutionTrace, fmt: OutputFormat
    ) -> str:
        if fmt == OutputFormat.JSON:
            final = trace.final_state.entries
            document = EvolutionDocument(
                model_id=model.model_id,
                dt=trace.dt,
                steps=trace.steps,
                times=trace.times,
                trace_drift=trace.trace_drift,
                hermiticity_drift=trace.hermiticity_drift,
                min_eigenvalue=trace.min_eigenvalue,
                residual=trace.residual,
                final_state_real=final.real.tolist(),
                final_state_imag=final.imag.tolist(),
                exact_distance=trace.exact_distance,
            )
            return render_json(document)
        rows = zip(
            trace.times,
            trace.trace_drift,
            trace.hermiticity_drift,
            trace.min_eigenvalue,
            trace.residual,
        )
        return render_csv(EVOLVE_HEADER, rows)

    def nullspace(self, config: RunConfig) -> str:
        model = self._model(config)
        elements = null_space(model, config.task.svd_tol)
        return self.render_nullspace(model, elements, config.task.svd_tol, config.output.format)

    def render_nullspace(
        self,
        model: LiouvillianModel,
        elements: list[KernelElement],
        svd_tol: float,
        fmt: OutputFormat,
    ) -> str:
        if fmt == OutputFormat.JSON:
            document = NullSpaceDocument(
                model_id=model.model_id,
                svd_tol=svd_tol,
                dimension=len(elements),
                elements=[
                    KernelRow(
                        index=i,
                        residual=element.residual,
                        hermitian=element.hermitian,
                        operator_real=element.operator.entries.real.tolist(),
                        operator_imag=element.operator.entries.imag.tolist(),
                    )
                    for i, element in enumerate(elements)
                ],
            )
            return render_json(document)
        rows = [[i, e.residual, e.hermitian] for i, e in enumerate(elements)]
        return render_csv(NULLSPACE_HEADER, rows)

    def spectrum(self, config: RunConfig) -> str:
        model = self._model(config)
        eigenvalues = spectrum(model)
        if config.output.format == OutputFormat.JSON:
            document = SpectrumDocument(
                model_id=model.model_id,
                zero_count=count_zero_eigenvalues(eigenvalues, config.task.svd_tol),
                eigenvalues=[
                    ComplexValue(real=float(z.real), imag=float(z.imag)) for z in eigenvalues
                ],
            )
            return render_json(document)
        rows = [[i, float(z.real), float(z.imag)] for i, z in enumerate(eigenvalues)]
        return render_csv(SPECTRUM_HEADER, rows)

    def reproduce(
        self,
        groups: Optional[list[ReproduceGroup]] = None,
        convention: LambdaConvention = LambdaConvention.CORRECTED,
        seed: Optional[int] = None,
    ) -> ReproduceSummary:
        groups = groups or [ReproduceGroup(g) for g in ReproduceGroup.all_types()]
        return run_reproduce(groups, convention, np.random.default_rng(seed))
