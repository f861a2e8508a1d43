"""
Frames Service for funtf-potential
Frame operators, classification, naive potentials and Auerbach bases
"""

import logging
from typing import Any

import numpy as np

from ..config.settings import search_config, settings
from ..core.errors import ConvergenceError, InvalidInputError, UnsupportedSpaceError
from ..models.frame import FrameSystem, OperatorMatrix
from ..models.results import Classification
from ..models.space import SpaceSpec
from . import spaces

logger = logging.getLogger(__name__)


def frame_operator(frame: FrameSystem) -> OperatorMatrix:
    """S(v) = Σ fⱼ(v) xⱼ, i.e. Mᵢₖ = Σⱼ xⱼ[i] fⱼ[k]."""
    return OperatorMatrix(space=frame.space, matrix=frame.vectors.T @ frame.functionals)


def gram_matrix(frame: FrameSystem) -> np.ndarray:
    """A[j, k] = fⱼ(xₖ)."""
    return frame.functionals @ frame.vectors.T


def pair_values(frame: FrameSystem) -> np.ndarray:
    """fⱼ(xⱼ) for every j."""
    return np.einsum("jk,jk->j", frame.functionals, frame.vectors)


def vector_norms(frame: FrameSystem) -> np.ndarray:
    return spaces.row_norms(frame.space, frame.vectors)


def functional_norms(frame: FrameSystem) -> np.ndarray:
    return spaces.row_dual_norms(frame.space, frame.functionals)


def normalization_defect(frame: FrameSystem) -> float:
    """Largest deviation of ‖xⱼ‖, ‖fⱼ‖ and fⱼ(xⱼ) from 1."""
    defects = np.concatenate(
        [
            np.abs(vector_norms(frame) - 1.0),
            np.abs(functional_norms(frame) - 1.0),
            np.abs(pair_values(frame) - 1.0),
        ]
    )
    return float(defects.max())


def is_normalized(frame: FrameSystem, tol: float | None = None) -> bool:
    tol = settings.normalization_tol if tol is None else tol
    return normalization_defect(frame) <= tol


def classify(frame: FrameSystem, tol: float | None = None) -> Classification:
    """
    Label a frame funtf(λ), schauder, approximate or none.

    funtf takes priority, so an Auerbach basis reports funtf(1) while
    is_schauder is also set.
    """
    tol = settings.classify_tol if tol is None else tol
    if tol <= 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")

    matrix = frame_operator(frame).matrix
    n = frame.dim
    identity = np.eye(n)
    scale = np.trace(matrix) / n
    tight_residual = float(np.linalg.norm(matrix - scale * identity))
    identity_residual = float(np.linalg.norm(matrix - identity))
    sigma_min = float(np.linalg.svd(matrix, compute_uv=False).min())
    normalized = is_normalized(frame)

    tight = tight_residual <= tol and abs(np.imag(scale)) <= tol
    is_schauder = identity_residual <= tol
    is_approximate = sigma_min > tol
    tight_scale = float(np.real(scale)) if tight else None

    if normalized and tight:
        kind = "funtf"
    elif is_schauder:
        kind = "schauder"
    elif is_approximate:
        kind = "approximate"
    else:
        kind = "none"

    return Classification(
        kind=kind,
        scale=tight_scale if kind == "funtf" else None,
        normalized=normalized,
        is_schauder=is_schauder,
        is_approximate=is_approximate,
        tight_scale=tight_scale,
        identity_residual=identity_residual,
        tight_residual=tight_residual,
        sigma_min=sigma_min,
        tol=tol,
    )


def naive_potential_sq(frame: FrameSystem) -> float:
    """Σⱼₖ |fⱼ(xₖ)|²"""
    return float(np.sum(np.abs(gram_matrix(frame)) ** 2))


def naive_potential_sym(frame: FrameSystem) -> float:
    """Σⱼₖ |fⱼ(xₖ)·fₖ(xⱼ)|"""
    gram = gram_matrix(frame)
    return float(np.sum(np.abs(gram * gram.T)))


def trace_lower_bound(frame: FrameSystem) -> float:
    """|Σⱼ fⱼ(xⱼ)|² / n, a lower bound for π₂(S)²."""
    return float(abs(np.sum(pair_values(frame))) ** 2 / frame.dim)


def union(first: FrameSystem, second: FrameSystem) -> FrameSystem:
    if first.space != second.space:
        raise InvalidInputError("cannot join frames on different spaces")
    return FrameSystem(
        space=first.space,
        vectors=np.vstack([first.vectors, second.vectors]),
        functionals=np.vstack([first.functionals, second.functionals]),
    )


def scaled(
    frame: FrameSystem, d: float, weights: Any | None = None
) -> FrameSystem:
    """The frame (d·cⱼxⱼ, fⱼ/cⱼ); its operator is d times the original."""
    c = np.ones(frame.length) if weights is None else np.asarray(weights)
    if c.shape != (frame.length,) or np.any(c == 0):
        raise InvalidInputError("weights must be nonzero, one per pair")
    return FrameSystem(
        space=frame.space,
        vectors=d * c[:, None] * frame.vectors,
        functionals=frame.functionals / c[:, None],
    )


def rescaled_to_unit(frame: FrameSystem) -> FrameSystem:
    """(xⱼ/‖xⱼ‖, fⱼ/‖fⱼ‖)"""
    return FrameSystem(
        space=frame.space,
        vectors=frame.vectors / vector_norms(frame)[:, None],
        functionals=frame.functionals / functional_norms(frame)[:, None],
    )


def basis_frame(space: SpaceSpec) -> FrameSystem:
    """Unit vector basis of an ℓp or weighted ℓp space, normalized."""
    if not space.is_lp_family:
        raise UnsupportedSpaceError("basis_frame needs a 1-unconditional canonical basis")
    s = space.scales
    return FrameSystem(space=space, vectors=np.diag(1.0 / s), functionals=np.diag(s))


def auerbach_basis(
    space: SpaceSpec,
    seed: int | None = None,
    starts: int | None = None,
    max_sweeps: int | None = None,
) -> FrameSystem:
    """
    n normalized pairs with fⱼ(xᵢ) = δᵢⱼ.

    ℓp spaces use the canonical basis. Polytope norms maximize |det| over
    columns drawn from the unit ball vertices by multi-start coordinate
    ascent; at a coordinate-wise maximum every row of the inverse has dual
    norm exactly 1.
    """
    if space.is_lp_family:
        return basis_frame(space)

    config = search_config.auerbach_config
    seed = config["seed"] if seed is None else seed
    starts = config["starts"] if starts is None else starts
    max_sweeps = config["max_sweeps"] if max_sweeps is None else max_sweeps

    candidates = spaces.unit_ball_vertices(space)
    n = space.dim
    rng = np.random.default_rng(seed)
    best_det = 0.0
    best_columns: np.ndarray | None = None

    for start in range(starts):
        columns = candidates[rng.choice(len(candidates), size=n, replace=False)].T.copy()
        det = abs(np.linalg.det(columns))
        if det < 1e-12:
            continue
        for _ in range(max_sweeps):
            improved = False
            for i in range(n):
                cofactor = np.linalg.det(columns) * np.linalg.inv(columns)[i]
                scores = np.abs(candidates @ cofactor)
                k = int(np.argmax(scores))
                if scores[k] > det * (1.0 + 1e-12):
                    columns[:, i] = candidates[k]
                    det = float(scores[k])
                    improved = True
            if not improved:
                break
        logger.debug(f"Auerbach start {start}: |det| = {det:.12g}")
        if det > best_det * (1.0 + 1e-12):
            best_det, best_columns = det, columns.copy()

    if best_columns is None or best_det < 1e-12:
        raise ConvergenceError(
            f"determinant maximization failed after {starts} starts",
            space=space.label(),
        )

    logger.info(f"Auerbach basis for {space.label()} with |det| = {best_det:.12g}")
    return FrameSystem(
        space=space, vectors=best_columns.T, functionals=np.linalg.inv(best_columns)
    )


def random_normalized_frame(
    space: SpaceSpec, length: int, rng: np.random.Generator
) -> FrameSystem:
    """Random unit vectors paired with their normalizing functionals."""
    vectors = spaces.random_unit_vectors(space, length, rng)
    functionals = np.array([spaces.normalizing_functional(space, x) for x in vectors])
    return FrameSystem(space=space, vectors=vectors, functionals=functionals)


def random_schauder_frame(
    space: SpaceSpec, length: int, rng: np.random.Generator
) -> FrameSystem:
    """Random (xⱼ, fⱼ) with Σ fⱼ⊗xⱼ = I, via F = X (XᵀX)⁻¹."""
    if length < space.dim:
        raise InvalidInputError("a Schauder frame needs at least n pairs")
    vectors = rng.standard_normal((length, space.dim))
    if space.is_complex:
        vectors = vectors + 1j * rng.standard_normal((length, space.dim))
    functionals = vectors @ np.linalg.inv(vectors.T @ vectors)
    return FrameSystem(space=space, vectors=vectors, functionals=functionals)


def counterexample_frames() -> dict[str, FrameSystem]:
    """
    Three normalized frames of length 3 on real ℓ₁² for which the naive
    potentials rank a non-tight frame below a tight one.
    """
    space = SpaceSpec.lp(2, 1)
    e1, e2 = np.eye(2)
    shared = np.array([e1, e1 - e2, e1 + e2])
    return {
        "x": FrameSystem(
            space=space,
            vectors=np.array([e1, 0.25 * e1 - 0.75 * e2, 0.25 * e1 + 0.75 * e2]),
            functionals=shared,
        ),
        "y": FrameSystem(
            space=space,
            vectors=np.array([e1, 0.5 * e1 - 0.5 * e2, 0.5 * e1 + 0.5 * e2]),
            functionals=shared,
        ),
        "z": FrameSystem(
            space=space,
            vectors=np.array([e1, e2, 0.5 * e1 + 0.5 * e2]),
            functionals=np.array([e1 - e2, e2, e1 + e2]),
        ),
    }
