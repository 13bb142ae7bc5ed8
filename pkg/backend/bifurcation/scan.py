"""Parameter scans of the fold stationarity function."""

import itertools
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
from loguru import logger

from fock.schemas import FockSpace
from liouvillian.schemas import FoldParams
from shared.exceptions import config_error

from .constants import DEFAULT_MATCH_TOL, BranchKind, LambdaConvention
from .normal_form import fold_normal_form, fold_params_from_normal_form
from .schemas import BranchRecord, ScanResult


def lambda_grid(start: float, stop: float, num: int) -> np.ndarray:
    if num < 1:
        raise config_error(f"Grid needs at least one point, got num={num}")
    if num == 1:
        return np.array([float(start)])
    return np.linspace(start, stop, num)


def lambda_sweep(
    a: float,
    lambdas: Sequence[float],
    convention: LambdaConvention = LambdaConvention.CORRECTED,
) -> list[FoldParams]:
    """Fold parameters along λ at fixed shift a."""
    return [fold_params_from_normal_form(a, float(lam), convention) for lam in lambdas]


def alpha_grid(
    alpha0: Sequence[float], alpha1: Sequence[float], alpha2: Sequence[float]
) -> list[FoldParams]:
    """Cartesian product, α₀ varying slowest."""
    return [
        FoldParams(alpha0=a0, alpha1=a1, alpha2=a2)
        for a0, a1, a2 in itertools.product(alpha0, alpha1, alpha2)
    ]


def matching_levels(roots: Sequence[float], space: FockSpace, match_tol: float) -> list[int]:
    """Fock levels n < dim with |E_n - root| < match_tol·ħω for some root."""
    quantum = space.quantum
    levels = set()
    for root in roots:
        n = int(round(root / quantum - 0.5))
        if 0 <= n < space.dim and abs(space.energy(n) - root) < match_tol * quantum:
            levels.add(n)
    return sorted(levels)


def branch_record(
    index: int,
    params: FoldParams,
    space: FockSpace,
    match_tol: float,
    convention: LambdaConvention,
) -> BranchRecord:
    base = dict(
        grid_index=index,
        alpha0=params.alpha0,
        alpha1=params.alpha1,
        alpha2=params.alpha2,
    )
    if params.alpha2 == 0:
        logger.warning(f"Grid point {index} has alpha2 = 0; no normal form")
        if params.alpha1 != 0:
            root = -params.alpha0 / params.alpha1
            return BranchRecord(
                **base,
                root_low=root,
                root_high=root,
                stationary_levels=matching_levels([root], space, match_tol),
            )
        if params.alpha0 == 0:
            return BranchRecord(**base, stationary_levels=list(range(space.dim)))
        return BranchRecord(**base)

    normal_form = fold_normal_form(params, convention)
    roots = normal_form.roots()
    return BranchRecord(
        **base,
        a=normal_form.a,
        lam=normal_form.lam,
        root_low=roots[0] if roots else None,
        root_high=roots[-1] if roots else None,
        branch=normal_form.branch,
        stationary_levels=matching_levels(roots, space, match_tol),
    )


def scan(
    grid: Sequence[FoldParams],
    space: FockSpace,
    match_tol: float = DEFAULT_MATCH_TOL,
    convention: LambdaConvention = LambdaConvention.CORRECTED,
    workers: int = 1,
) -> ScanResult:
    """Normal form, root pair and stationary Fock levels at every grid point.

    Records come back in grid order whatever the worker count.
    """
    if not grid:
        raise config_error("Scan grid is empty")

    def evaluate(item: tuple[int, FoldParams]) -> BranchRecord:
        index, params = item
        return branch_record(index, params, space, match_tol, convention)

    items = list(enumerate(grid))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            records = list(executor.map(evaluate, items))
    else:
        records = [evaluate(item) for item in items]

    pairs = sum(1 for record in records if record.branch == BranchKind.PAIR)
    hits = sum(1 for record in records if record.stationary_levels)
    logger.info(f"Scanned {len(records)} points: {pairs} with root pairs, {hits} with Fock hits")
    return ScanResult(convention=convention, match_tol=match_tol, records=records)
