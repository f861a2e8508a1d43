"""
Spaces Service for funtf-potential
Norms, dual norms, dual-ball extreme points and normalizing functionals
"""

import logging
import math
from functools import lru_cache
from itertools import combinations, product
from typing import Any

import numpy as np
from scipy.linalg import LinAlgError, lu_factor, lu_solve
from scipy.stats import norm as gaussian
from scipy.stats import qmc

from ..config.settings import settings
from ..core.errors import DimensionMismatchError, InvalidInputError, UnsupportedSpaceError
from ..models.results import DualVertexSet
from ..models.space import PolytopeNorm, SpaceSpec, WeightedLpNorm

logger = logging.getLogger(__name__)

# Slack used when deciding whether a solved point lies in a polytope.
_FEASIBILITY_SLACK = 1e-9


def as_vector(space: SpaceSpec, x: Any) -> np.ndarray:
    """Coerce x to a length-n coordinate array over the space's field."""
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.shape[0] != space.dim:
        raise DimensionMismatchError(
            f"expected a vector of length {space.dim}, got shape {arr.shape}"
        )
    if np.iscomplexobj(arr) and not space.is_complex:
        if np.any(arr.imag != 0):
            raise InvalidInputError("complex coordinates supplied for a real space")
        arr = arr.real
    return arr.astype(space.dtype)


def dual_exponent(p: float) -> float:
    """Conjugate exponent q with 1/p + 1/q = 1."""
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _lp_value(a: np.ndarray, p: float) -> float:
    """‖a‖_p of a nonnegative array, rescaled by its max before powering."""
    if a.size == 0:
        return 0.0
    peak = float(np.max(a))
    if peak == 0.0:
        return 0.0
    if math.isinf(p):
        return peak
    if p == 1:
        return float(np.sum(a))
    if p == 2:
        return float(np.linalg.norm(a))
    ratio = a / peak
    return peak * float(np.sum(ratio**p)) ** (1.0 / p)


def _require_real_polytope(space: SpaceSpec) -> None:
    if space.is_complex:
        raise UnsupportedSpaceError("polytope norms are only defined over the reals")


def norm(space: SpaceSpec, x: Any) -> float:
    """‖x‖ in the space."""
    x = as_vector(space, x)
    if isinstance(space.norm, PolytopeNorm):
        _require_real_polytope(space)
        vertices = np.asarray(space.norm.dual_vertices, dtype=float)
        return float(np.max(np.abs(vertices @ x)))
    return _lp_value(np.abs(space.scales * x), space.p)


def dual_norm(space: SpaceSpec, f: Any) -> float:
    """‖f‖ in the dual space, with f acting bilinearly: f(x) = Σ fₖxₖ."""
    f = as_vector(space, f)
    if isinstance(space.norm, PolytopeNorm):
        _require_real_polytope(space)
        return float(np.max(np.abs(unit_ball_vertices(space) @ f)))
    return _lp_value(np.abs(f / space.scales), dual_exponent(space.p))


def apply(f: Any, x: Any) -> complex | float:
    """f(x) = Σ fₖxₖ without conjugation."""
    value = np.dot(np.asarray(f), np.asarray(x))
    return complex(value) if np.iscomplexobj(value) else float(value)


def dual_space(space: SpaceSpec) -> SpaceSpec:
    """The dual space X* expressed as a SpaceSpec of the same family."""
    if isinstance(space.norm, PolytopeNorm):
        _require_real_polytope(space)
        return SpaceSpec.polytope(unit_ball_vertices(space).tolist())
    q = dual_exponent(space.p)
    if isinstance(space.norm, WeightedLpNorm):
        inverse = 1.0 / space.scales
        weights = inverse if math.isinf(q) else inverse**q
        return SpaceSpec.weighted_lp(q, weights.tolist(), field=space.field.value)
    return SpaceSpec.lp(space.dim, q, field=space.field.value)


def _unique_rows(rows: np.ndarray, decimals: int = 12) -> np.ndarray:
    if rows.shape[0] == 0:
        return rows
    keys = np.round(rows, decimals) + 0.0
    if np.iscomplexobj(keys):
        keys = np.concatenate([keys.real, keys.imag], axis=1) + 0.0
    _, index = np.unique(keys, axis=0, return_index=True)
    return rows[np.sort(index)]


def sign_vectors(n: int) -> np.ndarray:
    """All 2ⁿ vectors in {±1}ⁿ, starting from (1, ..., 1)."""
    return np.array(list(product((1.0, -1.0), repeat=n)))


def _enumerate_polytope(dual_vertices: np.ndarray) -> np.ndarray:
    """Vertices of {x : |⟨v, x⟩| ≤ 1 for all v}."""
    n = dual_vertices.shape[1]
    representatives = _unique_rows(
        np.array([v if _leading_positive(v) else -v for v in dual_vertices])
    )
    signs = sign_vectors(n)
    found = []
    for index in combinations(range(representatives.shape[0]), n):
        rows = representatives[list(index)]
        if np.linalg.matrix_rank(rows) < n:
            continue
        try:
            lu = lu_factor(rows)
        except (LinAlgError, ValueError):
            continue
        for s in signs:
            x = lu_solve(lu, s)
            if np.max(np.abs(dual_vertices @ x)) <= 1.0 + _FEASIBILITY_SLACK:
                found.append(x)
    if not found:
        raise UnsupportedSpaceError("polytope unit ball has no vertices (unbounded?)")
    vertices = _unique_rows(np.array(found), decimals=9)
    order = np.lexsort(vertices.T[::-1])
    return vertices[order]


def _leading_positive(v: np.ndarray) -> bool:
    nonzero = np.flatnonzero(np.abs(v) > 0)
    return bool(nonzero.size == 0 or v[nonzero[0]] > 0)


@lru_cache(maxsize=128)
def _ball_vertices(space: SpaceSpec) -> np.ndarray:
    s = space.scales
    n = space.dim
    if isinstance(space.norm, PolytopeNorm):
        vertices = _enumerate_polytope(np.asarray(space.norm.dual_vertices, dtype=float))
        logger.debug(f"Enumerated {len(vertices)} unit ball vertices for {space.label()}")
    elif space.p == 1:
        basis = np.diag(1.0 / s)
        vertices = np.vstack([basis, -basis])
    else:
        vertices = sign_vectors(n) / s
    vertices.setflags(write=False)
    return vertices


def unit_ball_vertices(space: SpaceSpec) -> np.ndarray:
    """Extreme points of the primal unit ball of a real polyhedral space."""
    if not space.is_polyhedral:
        raise UnsupportedSpaceError(
            f"{space.label()} does not have a polyhedral unit ball"
        )
    return _ball_vertices(space)


def _quasi_uniform_directions(count: int, dim: int, seed: int) -> np.ndarray:
    if dim == 2:
        angles = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(angles), np.sin(angles)])
    sampler = qmc.Halton(d=dim, scramble=True, seed=seed)
    points = np.clip(sampler.random(count), 1e-12, 1.0 - 1e-12)
    return gaussian.ppf(points)


def _normalize_dual(space: SpaceSpec, rows: np.ndarray) -> np.ndarray:
    scale = np.array([dual_norm(space, r) for r in rows])
    keep = scale > 0
    return rows[keep] / scale[keep, None]


def dual_extreme_points(
    space: SpaceSpec,
    budget: int | None = None,
    phase_count: int | None = None,
    seed: int | None = None,
) -> DualVertexSet:
    """
    Extreme points of the dual unit ball: exact for real polyhedral spaces,
    quasi-uniform samples (flagged non-exhaustive) otherwise.
    """
    budget = settings.dual_sample_budget if budget is None else budget
    phase_count = settings.phase_count if phase_count is None else phase_count
    seed = settings.seed if seed is None else seed
    if budget <= 0:
        raise InvalidInputError(f"budget must be positive, got {budget}")

    n = space.dim
    s = space.scales

    if space.is_polyhedral:
        if isinstance(space.norm, PolytopeNorm):
            stored = np.asarray(space.norm.dual_vertices, dtype=float)
            ball = unit_ball_vertices(space)
            on_sphere = np.max(np.abs(stored @ ball.T), axis=1) >= 1.0 - 1e-12
            return DualVertexSet(vertices=stored[on_sphere], exhaustive=True)
        if space.p == 1:
            return DualVertexSet(vertices=sign_vectors(n) * s, exhaustive=True)
        basis = np.diag(s)
        return DualVertexSet(vertices=np.vstack([basis, -basis]), exhaustive=True)

    if space.is_complex and space.p == 1:
        # Torus of extreme points; the first phase is fixed since |g(x)| is
        # invariant under a global unimodular factor.
        phases = np.exp(2j * np.pi * np.arange(phase_count) / phase_count)
        combos = phase_count ** (n - 1)
        if combos <= 65536:
            grid = np.array(list(product(phases, repeat=n - 1)), dtype=complex)
        else:
            rng = np.random.default_rng(seed)
            grid = phases[rng.integers(0, phase_count, size=(65536, n - 1))]
        grid = np.asarray(grid, dtype=complex).reshape(len(grid), n - 1)
        rows = np.hstack([np.ones((grid.shape[0], 1)), grid]) * s
        return DualVertexSet(vertices=rows, exhaustive=False)

    if space.is_complex and math.isinf(space.p):
        return DualVertexSet(vertices=np.diag(s).astype(complex), exhaustive=False)

    # Smooth norms: quasi-uniform samples plus the coordinate functionals.
    if space.is_complex:
        raw = _quasi_uniform_directions(budget, 2 * n, seed)
        directions = raw[:, :n] + 1j * raw[:, n:]
        basis = np.vstack([np.eye(n), -np.eye(n)]).astype(complex)
    else:
        directions = _quasi_uniform_directions(budget, n, seed)
        basis = np.vstack([np.eye(n), -np.eye(n)])
    rows = _normalize_dual(space, np.vstack([directions, basis]))
    return DualVertexSet(vertices=_unique_rows(rows), exhaustive=False)


def normalizing_functional(space: SpaceSpec, x: Any) -> np.ndarray:
    """
    f with ‖f‖* = 1 and f(x) = ‖x‖. At non-smooth points of ℓ₁, ℓ∞ and
    polytope norms the lexicographically smallest optimal dual vertex is
    returned (complex ℓ₁ uses 0 off the support).
    """
    x = as_vector(space, x)
    if not np.any(x):
        raise InvalidInputError("the zero vector has no normalizing functional")

    if isinstance(space.norm, PolytopeNorm) or (
        space.p is not None and math.isinf(space.p) and not space.is_complex
    ):
        vertices = dual_extreme_points(space).vertices
        values = vertices @ x
        best = float(np.max(values))
        ties = vertices[values >= best - 1e-12 * max(1.0, abs(best))]
        return min(ties, key=lambda row: tuple(row)).copy()

    s = space.scales
    y = s * x
    magnitude = np.abs(y)
    phase = np.zeros_like(y)
    support = magnitude > 0
    phase[support] = np.conj(y[support]) / magnitude[support]

    if space.p == 1:
        f = s * phase
        if not space.is_complex:
            f[~support] = -s[~support]
        return f

    if math.isinf(space.p):
        j = int(np.argmax(magnitude))
        f = np.zeros(space.dim, dtype=complex)
        f[j] = s[j] * phase[j]
        return f

    p = space.p
    total = _lp_value(magnitude, p)
    return s * phase * (magnitude / total) ** (p - 1.0)


def admissibility_constant(space: SpaceSpec, vectors: np.ndarray) -> tuple[float, bool]:
    """
    sup over ‖g‖* ≤ 1 of Σᵢ |g(xᵢ)|², and whether the value is exact.

    Exact for real polyhedral spaces (max over dual vertices) and Hilbert
    spaces (largest eigenvalue of Σ zᵢzᵢᴴ with z = s∘x); sampled otherwise.
    """
    vectors = np.atleast_2d(np.asarray(vectors))
    if vectors.shape[1] != space.dim:
        raise DimensionMismatchError(
            f"sequence vectors have length {vectors.shape[1]}, expected {space.dim}"
        )
    if space.is_hilbert:
        z = vectors * space.scales
        frame = z.T @ np.conj(z)
        return float(np.linalg.eigvalsh(frame).max()), True
    dual = dual_extreme_points(space)
    values = np.sum(np.abs(dual.vertices @ vectors.T) ** 2, axis=1)
    return float(values.max()), dual.exhaustive


def random_unit_vectors(
    space: SpaceSpec, count: int, rng: np.random.Generator
) -> np.ndarray:
    """count random points on the unit sphere of the space."""
    raw = rng.standard_normal((count, space.dim))
    if space.is_complex:
        raw = raw + 1j * rng.standard_normal((count, space.dim))
    return np.array([v / norm(space, v) for v in raw])


def _lp_rows(a: np.ndarray, p: float) -> np.ndarray:
    if a.shape[1] == 0:
        return np.zeros(a.shape[0])
    peak = np.max(a, axis=1)
    if math.isinf(p):
        return peak
    if p == 1:
        return np.sum(a, axis=1)
    safe = np.where(peak > 0, peak, 1.0)
    return np.where(
        peak > 0, safe * np.sum((a / safe[:, None]) ** p, axis=1) ** (1.0 / p), 0.0
    )


def row_norms(space: SpaceSpec, rows: Any) -> np.ndarray:
    """‖·‖ of every row of a 2-D array."""
    rows = np.atleast_2d(np.asarray(rows))
    if rows.shape[1] != space.dim:
        raise DimensionMismatchError(
            f"rows have length {rows.shape[1]}, expected {space.dim}"
        )
    if isinstance(space.norm, PolytopeNorm):
        vertices = np.asarray(space.norm.dual_vertices, dtype=float)
        return np.max(np.abs(rows @ vertices.T), axis=1)
    return _lp_rows(np.abs(rows * space.scales), space.p)


def row_dual_norms(space: SpaceSpec, rows: Any) -> np.ndarray:
    """‖·‖* of every row of a 2-D array."""
    rows = np.atleast_2d(np.asarray(rows))
    if rows.shape[1] != space.dim:
        raise DimensionMismatchError(
            f"rows have length {rows.shape[1]}, expected {space.dim}"
        )
    if isinstance(space.norm, PolytopeNorm):
        return np.max(np.abs(rows @ unit_ball_vertices(space).T), axis=1)
    return _lp_rows(np.abs(rows / space.scales), dual_exponent(space.p))
