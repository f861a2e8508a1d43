"""
Erasure Service for funtf-potential
Operator norms, maximal erasure errors and one-erasure optimality
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import Any

import numpy as np
from scipy.optimize import minimize

from ..config.settings import settings, solver_config
from ..core.errors import (
    DimensionMismatchError,
    InvalidInputError,
    NotSchauderFrameError,
    SubsetLimitError,
)
from ..models.frame import FrameSystem, OperatorMatrix
from ..models.results import ErasureOptimality, ErasureReport, OperatorNorm
from ..models.space import SpaceSpec
from . import frames, spaces

logger = logging.getLogger(__name__)


def _matrix(T: Any, domain: SpaceSpec, range_: SpaceSpec) -> np.ndarray:
    matrix = T.matrix if isinstance(T, OperatorMatrix) else np.asarray(T)
    if matrix.shape != (range_.dim, domain.dim):
        raise DimensionMismatchError(
            f"operator has shape {matrix.shape}, expected ({range_.dim}, {domain.dim})"
        )
    return matrix


def _best_row(
    T: np.ndarray, range_: SpaceSpec, candidates: np.ndarray
) -> OperatorNorm:
    values = spaces.row_norms(range_, candidates @ T.T)
    k = int(np.argmax(values))
    return OperatorNorm(value=float(values[k]), heuristic=False, argmax=candidates[k])


def _ascent(
    T: np.ndarray,
    domain: SpaceSpec,
    range_: SpaceSpec,
    restarts: int,
    seed: int,
) -> OperatorNorm:
    """Multi-start L-BFGS ascent of ‖Tx‖/‖x‖ over real coordinates."""
    n = domain.dim
    complex_field = domain.is_complex or np.iscomplexobj(T)
    rng = np.random.default_rng(seed)

    def unpack(z: np.ndarray) -> np.ndarray:
        return z[:n] + 1j * z[n:] if complex_field else z

    def pack(x: np.ndarray) -> np.ndarray:
        return np.concatenate([x.real, x.imag]) if complex_field else x.real

    def objective(z: np.ndarray) -> float:
        x = unpack(z)
        size = spaces.norm(domain, x)
        if size == 0:
            return 0.0
        return -spaces.norm(range_, T @ x) / size

    starts = [np.eye(n)[j] for j in range(n)]
    _, _, vh = np.linalg.svd(T)
    starts.extend(np.conj(vh[: min(n, 3)]))
    dual = spaces.dual_extreme_points(domain, seed=seed).vertices
    starts.extend(np.conj(dual[: max(0, restarts // 4)]))
    while len(starts) < restarts:
        starts.extend(spaces.random_unit_vectors(domain, 1, rng))
    starts = starts[:restarts]

    best_value, best_x = 0.0, None
    for start in starts:
        z0 = pack(np.asarray(start, dtype=complex if complex_field else float))
        result = minimize(objective, z0, method="L-BFGS-B")
        x = unpack(result.x)
        size = spaces.norm(domain, x)
        if size == 0:
            continue
        x = x / size
        value = spaces.norm(range_, T @ x)
        if value > best_value:
            best_value, best_x = value, x
    return OperatorNorm(value=float(best_value), heuristic=True, argmax=best_x)


def operator_norm_is_exact(domain: SpaceSpec, range_: SpaceSpec) -> bool:
    return (
        domain.is_polyhedral
        or (domain.is_lp_family and domain.p == 1)
        or (range_.is_lp_family and math.isinf(range_.p))
        or (domain.is_hilbert and range_.is_hilbert)
    )


def operator_norm(
    T: Any,
    domain: SpaceSpec,
    range_: SpaceSpec | None = None,
    restarts: int | None = None,
    seed: int | None = None,
) -> OperatorNorm:
    """
    ‖T : X → Y‖. Exact when the domain is real polyhedral or ℓ₁, the range
    is ℓ∞, or both spaces are Hilbert; otherwise a multi-start ascent value
    flagged heuristic (a lower estimate).
    """
    range_ = domain if range_ is None else range_
    T = _matrix(T, domain, range_)
    restarts = solver_config.erasure_config["restarts"] if restarts is None else restarts
    seed = settings.seed if seed is None else seed

    if not np.any(T):
        return OperatorNorm(value=0.0, heuristic=False, argmax=None)

    if domain.is_polyhedral:
        return _best_row(T, range_, spaces.unit_ball_vertices(domain))

    if domain.is_lp_family and domain.p == 1:
        return _best_row(T, range_, np.diag(1.0 / domain.scales).astype(T.dtype))

    if range_.is_lp_family and math.isinf(range_.p):
        # ‖Tx‖∞ = max over rows k of s_k|rowₖ·x|, so the norm is a max of dual norms.
        values = range_.scales * spaces.row_dual_norms(domain, T)
        k = int(np.argmax(values))
        argmax = spaces.normalizing_functional(spaces.dual_space(domain), T[k])
        return OperatorNorm(value=float(values[k]), heuristic=False, argmax=argmax)

    if domain.is_hilbert and range_.is_hilbert:
        weighted = (range_.scales[:, None] * T) / domain.scales[None, :]
        _, sigma, vh = np.linalg.svd(weighted)
        argmax = np.conj(vh[0]) / domain.scales
        return OperatorNorm(value=float(sigma[0]), heuristic=False, argmax=argmax)

    logger.debug(
        f"Heuristic operator norm {domain.label()} -> {range_.label()} "
        f"with {restarts} restarts"
    )
    return _ascent(T, domain, range_, restarts, seed)


def _subset_operator(frame: FrameSystem, subset: tuple[int, ...]) -> np.ndarray:
    index = list(subset)
    return frame.vectors[index].T @ frame.functionals[index]


def erasure_error(
    frame: FrameSystem,
    m: int,
    full_table: bool = False,
    threads: int | None = None,
    subset_cap: int | None = None,
) -> ErasureReport:
    """
    eₘ = max over m-subsets K of ‖Σ_{j∈K} fⱼ⊗xⱼ‖, the worst error left by
    erasing m pairs from the reconstruction. Indices in the report are 1-based.
    """
    config = solver_config.erasure_config
    threads = config["threads"] if threads is None else threads
    subset_cap = config["subset_cap"] if subset_cap is None else subset_cap

    N = frame.length
    if not 1 <= m < N:
        raise InvalidInputError(f"m must satisfy 1 <= m < N = {N}, got {m}")
    count = math.comb(N, m)
    if count > subset_cap:
        raise SubsetLimitError(
            f"C({N}, {m}) = {count} subsets exceeds the cap of {subset_cap}",
            subsets=count,
            cap=subset_cap,
        )

    subsets = list(combinations(range(N), m))
    space = frame.space

    def evaluate(subset: tuple[int, ...]) -> OperatorNorm:
        return operator_norm(_subset_operator(frame, subset), space, space)

    if m == 1:
        # e₁ = max ‖fⱼ‖‖xⱼ‖ since each erased term is rank one
        products = frames.vector_norms(frame) * frames.functional_norms(frame)
        values = [float(v) for v in products]
        heuristic = False
        if operator_norm_is_exact(space, space):
            enumerated = [evaluate(subset).value for subset in subsets]
            drift = max(abs(a - b) for a, b in zip(enumerated, values, strict=True))
            if drift > 1e-9 * max(1.0, max(values)):
                logger.warning(
                    f"e_1 cross-check drift {drift:.3g} between formula and enumeration"
                )
    else:
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(evaluate, subsets))
        else:
            results = [evaluate(subset) for subset in subsets]
        values = [r.value for r in results]
        heuristic = any(r.heuristic for r in results)

    k = int(np.argmax(values))
    logger.info(
        f"e_{m} = {values[k]:.12g} over {count} subsets (argmax {subsets[k]})"
    )
    table = None
    if full_table:
        table = [([j + 1 for j in s], v) for s, v in zip(subsets, values, strict=True)]
    return ErasureReport(
        m=m,
        value=values[k],
        argmax_subset=[j + 1 for j in subsets[k]],
        heuristic=heuristic,
        per_subset=table,
    )


def is_erasure_optimal(
    frame: FrameSystem, tol: float | None = None
) -> ErasureOptimality:
    """
    For a Schauder frame (S = I): e₁ is minimal, equal to n/N, exactly when
    ‖xⱼ‖‖fⱼ‖ = fⱼ(xⱼ) = n/N for every j, equivalently when the rescaled
    pairs (xⱼ/‖xⱼ‖, fⱼ/‖fⱼ‖) form a FUNTF.
    """
    tol = settings.classify_tol if tol is None else tol
    matrix = frames.frame_operator(frame).matrix
    residual = float(np.linalg.norm(matrix - np.eye(frame.dim)))
    if residual > tol:
        raise NotSchauderFrameError(
            f"frame operator is not the identity (residual {residual:.3g})",
            residual=residual,
        )

    target = frame.dim / frame.length
    products = frames.vector_norms(frame) * frames.functional_norms(frame)
    diagonal = np.real(frames.pair_values(frame))
    violations = [
        j + 1
        for j in range(frame.length)
        if abs(products[j] - target) > tol or abs(diagonal[j] - target) > tol
    ]
    rescaled = frames.classify(frames.rescaled_to_unit(frame), tol=tol)
    optimal = not violations
    rescaled_is_funtf = rescaled.kind == "funtf"
    if optimal != rescaled_is_funtf:
        logger.warning(
            "Erasure optimality and the rescaled FUNTF test disagree at "
            f"tol={tol:g}; products={products.tolist()}"
        )
    return ErasureOptimality(
        optimal=optimal,
        target=target,
        products=[float(v) for v in products],
        diagonal=[float(v) for v in diagonal],
        violations=violations,
        rescaled_is_funtf=rescaled_is_funtf,
    )
