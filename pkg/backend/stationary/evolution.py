"""Time evolution of vec(ρ)' = Λ vec(ρ)."""

import math
from typing import Optional

import numpy as np
import scipy.linalg
from loguru import logger

from fock.constants import DENSITY_MIN_EIGENVALUE
from fock.schemas import OperatorMatrix
from liouvillian.schemas import LiouvillianModel
from shared.exceptions import config_error, numerical_error

from .constants import EXACT_PROPAGATOR_MAX_SIZE, MAX_TRACE_DRIFT
from .schemas import EvolutionTrace


def _rk4_step(generator: np.ndarray, vec: np.ndarray, h: float) -> np.ndarray:
    k1 = generator @ vec
    k2 = generator @ (vec + 0.5 * h * k1)
    k3 = generator @ (vec + 0.5 * h * k2)
    k4 = generator @ (vec + h * k3)
    return vec + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _monitor(
    generator: np.ndarray, vec: np.ndarray, dim: int, trace0: complex
) -> tuple[float, float, float, float]:
    rho = vec.reshape(dim, dim)
    trace_drift = abs(np.trace(rho) - trace0)
    hermiticity_drift = float(np.max(np.abs(rho - rho.conj().T)))
    min_eigenvalue = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    residual = float(np.linalg.norm(generator @ vec))
    return trace_drift, hermiticity_drift, min_eigenvalue, residual


def propagate_exact(model: LiouvillianModel, rho0: OperatorMatrix, t: float) -> OperatorMatrix:
    """exp(tΛ) vec(ρ₀) for generators with dim² ≤ 1024."""
    size = model.generator.entries.shape[0]
    if size > EXACT_PROPAGATOR_MAX_SIZE:
        raise config_error(
            f"Exact propagator limited to dim^2 <= {EXACT_PROPAGATOR_MAX_SIZE}, got {size}"
        )
    if rho0.space != model.space:
        raise config_error("Initial state and model live on different Fock spaces")
    propagator = scipy.linalg.expm(t * model.generator.entries)
    vec = propagator @ rho0.entries.reshape(-1)
    return OperatorMatrix(space=model.space, entries=vec.reshape(model.space.dim, -1))


def evolve(
    model: LiouvillianModel,
    rho0: OperatorMatrix,
    t_final: float,
    dt: float,
    record_every: int = 1,
    cross_check: bool = False,
) -> EvolutionTrace:
    """Classical fixed-step RK4 from ρ₀ to t_final.

    Uses n = ⌈t_final/dt⌉ equal steps. Monitors are recorded at t = 0, every
    record_every steps and at t_final. With cross_check the final state is
    compared to the exact propagator.
    """
    if dt <= 0 or t_final <= 0:
        raise config_error(f"dt and t_final must be positive, got dt={dt}, t_final={t_final}")
    if record_every < 1:
        raise config_error(f"record_every must be at least 1, got {record_every}")
    if rho0.space != model.space:
        raise config_error("Initial state and model live on different Fock spaces")

    steps = max(1, math.ceil(t_final / dt - 1e-12))
    h = t_final / steps
    dim = model.space.dim
    generator = np.asarray(model.generator.entries)
    vec = rho0.entries.reshape(-1).astype(complex)
    trace0 = np.trace(rho0.entries)

    times, trace_drift, hermiticity_drift, min_eigenvalue, residual = [], [], [], [], []

    def record(t: float) -> None:
        values = _monitor(generator, vec, dim, trace0)
        times.append(t)
        trace_drift.append(values[0])
        hermiticity_drift.append(values[1])
        min_eigenvalue.append(values[2])
        residual.append(values[3])

    record(0.0)
    negative_reported = False
    for step in range(1, steps + 1):
        vec = _rk4_step(generator, vec, h)
        drift = abs(vec.reshape(dim, dim).trace() - trace0)
        if drift > MAX_TRACE_DRIFT:
            raise numerical_error(
                f"Trace drift {drift:.3e} at step {step} exceeds {MAX_TRACE_DRIFT}; reduce dt"
            )
        if step % record_every == 0 or step == steps:
            record(step * h)
            if min_eigenvalue[-1] < DENSITY_MIN_EIGENVALUE and not negative_reported:
                logger.warning(
                    f"{model.model_id}: state left the positive cone at t={step * h:.6g}, "
                    f"min eigenvalue {min_eigenvalue[-1]:.3e}"
                )
                negative_reported = True

    final_state = OperatorMatrix(space=model.space, entries=vec.reshape(dim, dim))
    exact_final_state: Optional[OperatorMatrix] = None
    exact_distance: Optional[float] = None
    if cross_check and generator.shape[0] <= EXACT_PROPAGATOR_MAX_SIZE:
        exact_final_state = propagate_exact(model, rho0, t_final)
        exact_distance = (final_state - exact_final_state).norm()
        logger.info(f"{model.model_id}: RK4 vs exact propagator distance {exact_distance:.3e}")

    logger.info(
        f"{model.model_id}: evolved {steps} steps of {h:.3e}, "
        f"max trace drift {max(trace_drift):.3e}"
    )
    return EvolutionTrace(
        times=times,
        trace_drift=trace_drift,
        hermiticity_drift=hermiticity_drift,
        min_eigenvalue=min_eigenvalue,
        residual=residual,
        final_state=final_state,
        dt=h,
        steps=steps,
        exact_final_state=exact_final_state,
        exact_distance=exact_distance,
    )
