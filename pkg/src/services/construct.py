"""
Construction Service for funtf-potential
Builds finite unit norm tight frames: Auerbach replication, the harmonic
(DFT) construction with Lozanovskii weights, induction on the length, the
explicit real ℓ₁ families and a numerical residual search.
"""

import logging
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from functools import partial
from typing import Any

import numpy as np
from scipy.optimize import least_squares, linprog, minimize, nnls

from ..config.settings import search_config, settings
from ..core.errors import (
    DimensionMismatchError,
    InvalidInputError,
    UnsupportedConstructionError,
    UnsupportedSpaceError,
)
from ..models.frame import FrameSystem
from ..models.results import DiagonalTarget, LozFactorization, SearchReport
from ..models.space import PolytopeNorm, SpaceSpec
from . import frames, spaces

logger = logging.getLogger(__name__)

SIMPLEX_TOL = 1e-9

# (dim, length) -> (a, b, c, d)
_ELL1_SPECIAL: dict[tuple[int, int], tuple[float, ...]] = {
    (3, 5): (1 / 6, 5 / 12),
    (4, 6): (1 / 4, 3 / 8, 1 / 4, 3 / 4),
    (4, 7): (1 / 8, 7 / 16, 5 / 8, 3 / 8),
}


def _require_unconditional(space: SpaceSpec) -> None:
    if space.is_lp_family:
        return
    if not isinstance(space.norm, PolytopeNorm):
        raise UnsupportedSpaceError(f"{space.label()} has no 1-unconditional basis")
    vertices = np.asarray(space.norm.dual_vertices, dtype=float)
    for k in range(space.dim):
        flipped = vertices.copy()
        flipped[:, k] *= -1.0
        if np.max(spaces.row_dual_norms(space, flipped)) > 1.0 + SIMPLEX_TOL:
            raise UnsupportedSpaceError(
                f"canonical basis of {space.label()} is not 1-unconditional"
            )


def _simplex_point(t: Any, dim: int) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if t.shape != (dim,):
        raise DimensionMismatchError(f"weights have shape {t.shape}, expected ({dim},)")
    if np.any(t < 0):
        raise InvalidInputError("weights must be nonnegative", weights=t.tolist())
    if abs(float(t.sum()) - 1.0) > SIMPLEX_TOL:
        raise InvalidInputError(f"weights sum to {t.sum()}, not 1")
    return t


def _polish_split(vertices: np.ndarray, weights: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """Newton-polish the optimality system αⱼ(Aᵀμ)ⱼ = tⱼ, Aα = 1, μ ≥ 0 over the active rows A."""
    alpha = alpha / float(np.max(vertices @ alpha))
    rows = np.unique(vertices[vertices @ alpha >= 1.0 - 1e-5], axis=0)
    mu, _ = nnls(rows.T, weights / alpha)
    size = alpha.size

    def optimality(z: np.ndarray) -> np.ndarray:
        a, m = z[:size], z[size:]
        return np.concatenate([a * (rows.T @ m) - weights, rows @ a - 1.0])

    start = np.concatenate([alpha, mu])
    result = least_squares(
        optimality, start, bounds=(0.0, np.inf), ftol=1e-15, xtol=1e-15, gtol=1e-15
    )
    before = float(np.linalg.norm(optimality(start)))
    after = float(np.linalg.norm(result.fun))
    if after > 1e-12 or np.any(result.x[:size] <= 0):
        logger.debug(
            f"Split polish kept the solver point (residual {before:.2e} -> {after:.2e})"
        )
        return alpha
    return result.x[:size]


def _entropy_split(space: SpaceSpec, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Maximize Σ tⱼ log αⱼ over the unit ball; then β = t/α lies on the dual sphere."""
    support = t > 0
    vertices = np.abs(np.asarray(space.norm.dual_vertices, dtype=float))[:, support]
    weights = t[support]

    def objective(u: np.ndarray) -> float:
        return -float(weights @ u)

    def gradient(u: np.ndarray) -> np.ndarray:
        return -weights

    start = np.log(weights / float(np.max(vertices @ weights)))
    result = minimize(
        objective,
        start,
        jac=gradient,
        method="SLSQP",
        constraints=[
            {
                "type": "ineq",
                "fun": lambda u: 1.0 - vertices @ np.exp(u),
                "jac": lambda u: -vertices * np.exp(u)[None, :],
            }
        ],
        options={"ftol": 1e-14, "maxiter": 1000},
    )
    if not result.success:
        logger.warning(f"Entropy program for {space.label()}: {result.message}")

    alphas = np.zeros(space.dim)
    alphas[support] = _polish_split(vertices, weights, np.exp(result.x))
    alphas /= spaces.norm(space, alphas)
    betas = np.zeros(space.dim)
    betas[support] = t[support] / alphas[support]
    return alphas, betas


def lozanovskii(space: SpaceSpec, t: Any) -> LozFactorization:
    """
    Split simplex weights t into αⱼβⱼ = tⱼ with ‖Σαⱼeⱼ‖ = ‖Σβⱼeⱼ*‖* = 1.

    Weighted ℓp uses αⱼ = tⱼ^{1/p}/sⱼ and βⱼ = tⱼ^{1/q}·sⱼ. Unconditional
    polytope norms solve the entropy program with SLSQP (about 1e-6), then
    Newton-polish its optimality system on the active dual vertices, which
    brings both norms to within about 1e-10 of one. If the polish does not
    converge, as when a vertex is nearly but not exactly active, the SLSQP
    point is returned.
    """
    _require_unconditional(space)
    t = _simplex_point(t, space.dim)

    if isinstance(space.norm, PolytopeNorm):
        alphas, betas = _entropy_split(space, t)
    else:
        p = space.p
        q = spaces.dual_exponent(p)
        s = space.scales
        alphas = np.power(t, 0.0 if math.isinf(p) else 1.0 / p) / s
        # 0⁰ = 1 lands on the side whose partner vanishes, so tⱼ = 0 stays exact
        betas = np.power(t, 0.0 if math.isinf(q) else 1.0 / q) * s

    return LozFactorization(
        alphas=tuple(float(a) for a in alphas), betas=tuple(float(b) for b in betas)
    )


def _diagonal(space: SpaceSpec, target: DiagonalTarget | Sequence[float] | None) -> np.ndarray:
    if target is None:
        return np.ones(space.dim)
    lambdas = np.asarray(
        target.lambdas if isinstance(target, DiagonalTarget) else target, dtype=float
    )
    if lambdas.shape != (space.dim,):
        raise DimensionMismatchError(
            f"{lambdas.size} diagonal entries for dimension {space.dim}"
        )
    if np.any(lambdas < 0) or not np.all(np.isfinite(lambdas)):
        raise InvalidInputError("diagonal entries must be finite and nonnegative")
    return lambdas


def dft_funtf(
    space: SpaceSpec, target: DiagonalTarget | Sequence[float] | None = None
) -> FrameSystem:
    """
    n normalized pairs with frame operator diag(λ), Σλ = n.

    xₖ = Σⱼ ωᵏʲ αⱼ eⱼ and fₖ = Σⱼ ω⁻ᵏʲ βⱼ eⱼ* with ω = e^{−2πi/n}; the
    geometric sums cancel every off-diagonal entry. Real spaces only admit
    the sign version for n ≤ 2.
    """
    n = space.dim
    lambdas = _diagonal(space, target)
    if abs(float(lambdas.sum()) - n) > SIMPLEX_TOL:
        raise InvalidInputError(f"diagonal sums to {lambdas.sum()}, expected {n}")
    if not space.is_complex and n > 2:
        raise UnsupportedConstructionError(
            f"no harmonic construction for real spaces of dimension {n}"
        )

    loz = lozanovskii(space, lambdas / n)
    alphas, betas = np.array(loz.alphas), np.array(loz.betas)

    if space.is_complex:
        j = np.arange(1, n + 1)
        k = np.arange(n)
        phases = np.exp(-2j * np.pi * np.outer(k, j) / n)
        vectors = phases * alphas[None, :]
        functionals = np.conj(phases) * betas[None, :]
    else:
        signs = np.array([[1.0, 1.0], [1.0, -1.0]])[:n, :n]
        vectors = signs * alphas[None, :]
        functionals = signs * betas[None, :]

    return FrameSystem(space=space, vectors=vectors, functionals=functionals)


def _basis_pair(space: SpaceSpec, j: int) -> tuple[np.ndarray, np.ndarray]:
    e = np.zeros(space.dim)
    e[j] = 1.0
    size = spaces.norm(space, e)
    return e / size, e * size


def funtf_of_length(
    space: SpaceSpec,
    N: int,
    lambdas: DiagonalTarget | Sequence[float] | None = None,
) -> FrameSystem:
    """
    Normalized frame of length N with operator diag(λ), Σλ = N (default
    λ = N/n). Repeatedly peels a basis pair off the largest λⱼ until the
    remaining diagonal has trace n, then finishes with dft_funtf.
    """
    n = space.dim
    if N < n:
        raise InvalidInputError(f"length {N} is below the dimension {n}")
    _require_unconditional(space)
    remaining = np.full(n, N / n) if lambdas is None else _diagonal(space, lambdas).copy()
    if abs(float(remaining.sum()) - N) > SIMPLEX_TOL * max(1, N):
        raise InvalidInputError(f"diagonal sums to {remaining.sum()}, expected {N}")

    extra_vectors, extra_functionals = [], []
    for _ in range(N - n):
        j = int(np.argmax(remaining))
        remaining[j] -= 1.0
        x, f = _basis_pair(space, j)
        extra_vectors.append(x)
        extra_functionals.append(f)

    frame = dft_funtf(space, np.clip(remaining, 0.0, None))
    if not extra_vectors:
        return frame
    dtype = frame.vectors.dtype
    return FrameSystem(
        space=space,
        vectors=np.vstack([frame.vectors, np.array(extra_vectors, dtype=dtype)]),
        functionals=np.vstack(
            [frame.functionals, np.array(extra_functionals, dtype=dtype)]
        ),
    )


def funtf_by_multiples(space: SpaceSpec, N: int) -> FrameSystem:
    """N/n copies of an Auerbach basis."""
    n = space.dim
    if N < n or N % n:
        raise UnsupportedConstructionError(f"length {N} is not a multiple of {n}")
    basis = frames.auerbach_basis(space)
    frame = basis
    for _ in range(N // n - 1):
        frame = frames.union(frame, basis)
    return frame


def ell1_parameter(n: int) -> float:
    """a = (r + 1/n)/(1 + r) with r = (n−3)/(n−1)."""
    if n < 3:
        raise UnsupportedConstructionError(f"the length n+1 family needs n >= 3, got {n}")
    r = (n - 3) / (n - 1)
    return (r + 1.0 / n) / (1.0 + r)


def ell1_funtf_n_plus_1(n: int) -> FrameSystem:
    """
    FUNTF of length n+1 on real ℓ₁ⁿ: xⱼ = a·eⱼ − (1−a)/(n−1)·Σ_{i≠j} eᵢ
    with fⱼ = eⱼ* − Σ_{i≠j} eᵢ*, plus x = Σ eᵢ/n paired with Σ eᵢ*.
    """
    a = ell1_parameter(n)
    off = (1.0 - a) / (n - 1)
    vectors = np.full((n + 1, n), -off)
    np.fill_diagonal(vectors[:n], a)
    vectors[n] = 1.0 / n
    functionals = -np.ones((n + 1, n))
    np.fill_diagonal(functionals[:n], 1.0)
    functionals[n] = 1.0
    return FrameSystem(space=SpaceSpec.lp(n, 1), vectors=vectors, functionals=functionals)


def ell1_special(dim: int, length: int) -> FrameSystem:
    """Explicit FUNTFs of length 5 on ℓ₁³ and of lengths 6 and 7 on ℓ₁⁴."""
    constants = _ELL1_SPECIAL.get((dim, length))
    if constants is None:
        raise UnsupportedConstructionError(
            f"no explicit ℓ1 family for dim={dim}, length={length}",
            supported=sorted(_ELL1_SPECIAL),
        )

    if dim == 3:
        a, b = constants
        signs = np.array([[1, 1], [-1, 1], [1, -1], [-1, -1]], dtype=float)
        vectors = np.vstack([[1.0, 0.0, 0.0], np.column_stack([-a * np.ones(4), b * signs])])
        functionals = np.vstack(
            [[1.0, 0.0, 0.0], np.column_stack([-np.ones(4), signs])]
        )
    else:
        a, b, c, d = constants
        signs = np.array([[1, 1], [-1, 1], [1, -1], [-1, -1]], dtype=float)
        cube = np.column_stack([a * np.ones(4), b * signs, np.zeros(4)])
        cube_f = np.column_stack([np.ones(4), signs, np.zeros(4)])
        tail = np.array([[c, 0, 0, d], [c, 0, 0, -d]])
        tail_f = np.array([[1.0, 0, 0, 1], [1.0, 0, 0, -1]])
        vectors = np.vstack([cube, tail])
        functionals = np.vstack([cube_f, tail_f])
        if length == 7:
            e4 = np.array([[0.0, 0.0, 0.0, 1.0]])
            vectors = np.vstack([vectors, e4])
            functionals = np.vstack([functionals, e4])

    return FrameSystem(
        space=SpaceSpec.lp(dim, 1), vectors=vectors, functionals=functionals
    )


def _ell1_parts(n: int) -> dict[int, Callable[[], FrameSystem]]:
    parts: dict[int, Callable[[], FrameSystem]] = {
        n: partial(frames.basis_frame, SpaceSpec.lp(n, 1))
    }
    if n >= 3:
        parts[n + 1] = partial(ell1_funtf_n_plus_1, n)
    for dim, length in _ELL1_SPECIAL:
        if dim == n:
            parts[length] = partial(ell1_special, dim, length)
    return parts


def ell1_funtf_of_length(n: int, N: int) -> FrameSystem:
    """
    FUNTF of length N on real ℓ₁ⁿ as a union of known pieces, using the
    fewest pieces. ℓ₁² goes through funtf_of_length.
    """
    if n < 1 or N < n:
        raise InvalidInputError(f"need 1 <= n <= N, got n={n}, N={N}")
    if n == 2:
        return funtf_of_length(SpaceSpec.lp(2, 1), N)

    parts = _ell1_parts(n)
    plans: list[list[int] | None] = [[]] + [None] * N
    for total in range(1, N + 1):
        for size in sorted(parts):
            previous = plans[total - size] if total >= size else None
            if previous is None:
                continue
            if plans[total] is None or len(previous) + 1 < len(plans[total]):
                plans[total] = previous + [size]

    plan = plans[N]
    if plan is None:
        raise UnsupportedConstructionError(
            f"no known decomposition of length {N} for real ℓ1^{n}",
            pieces=sorted(parts),
        )
    logger.debug(f"ℓ1^{n} length {N} from pieces {plan}")
    frame = parts[plan[0]]()
    for size in plan[1:]:
        frame = frames.union(frame, parts[size]())
    return frame


# Numerical search


def _residual(vectors: np.ndarray, functionals: np.ndarray, level: float) -> float:
    M = vectors.T @ functionals
    return float(np.sum(np.abs(M - level * np.eye(M.shape[0])) ** 2))


def _bilinear_lp(
    fixed: np.ndarray,
    norm_rows: np.ndarray,
    level: float,
    solve_for: str,
    bounds: list[tuple[float | None, float | None]] | None = None,
) -> np.ndarray | None:
    """
    With one side of every pair fixed, minimize Σ|M − level·I| entrywise
    subject to |row·v| ≤ 1 for the norm rows and fixed_j·v_j = 1.
    """
    N, n = fixed.shape
    identity = np.eye(n)
    if solve_for == "f":
        coupling = np.einsum("jk,lm->kljm", fixed, identity)
    else:
        coupling = np.einsum("jl,km->kljm", fixed, identity)
    coupling = coupling.reshape(n * n, N * n)
    target = level * identity.ravel()
    slack = np.eye(n * n)

    blocks = np.kron(np.eye(N), norm_rows)
    zeros = np.zeros((blocks.shape[0], n * n))
    A_ub = np.vstack(
        [
            np.hstack([coupling, -slack]),
            np.hstack([-coupling, -slack]),
            np.hstack([blocks, zeros]),
            np.hstack([-blocks, zeros]),
        ]
    )
    b_ub = np.concatenate([target, -target, np.ones(2 * blocks.shape[0])])

    A_eq = np.zeros((N, N * n + n * n))
    for j in range(N):
        A_eq[j, j * n : (j + 1) * n] = fixed[j]

    variable_bounds = bounds if bounds is not None else [(None, None)] * (N * n)
    result = linprog(
        np.concatenate([np.zeros(N * n), np.ones(n * n)]),
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=np.ones(N),
        bounds=variable_bounds + [(0.0, None)] * (n * n),
        method="highs",
    )
    if result.status != 0:
        logger.debug(f"Alternating LP ({solve_for}) failed: {result.message}")
        return None
    return result.x[: N * n].reshape(N, n)


def _avoiding_start(
    space: SpaceSpec, N: int, avoid: float, rng: np.random.Generator
) -> np.ndarray:
    vectors = spaces.random_unit_vectors(space, N, rng)
    for _ in range(50):
        signs = np.where(vectors >= 0, 1.0, -1.0)
        vectors = signs * np.maximum(np.abs(vectors), 1.1 * avoid)
        vectors /= spaces.row_norms(space, vectors)[:, None]
        if np.min(np.abs(vectors)) >= avoid:
            return vectors
    raise InvalidInputError(f"cannot keep every coordinate at least {avoid} in norm one")


def _search_polyhedral(
    space: SpaceSpec,
    N: int,
    rng: np.random.Generator,
    max_iters: int,
    success: float,
    avoid: float | None,
) -> tuple[np.ndarray, np.ndarray, float, int]:
    level = N / space.dim
    dual_rows = spaces.dual_extreme_points(space).vertices
    ball_rows = spaces.unit_ball_vertices(space)

    if avoid is None:
        vectors = spaces.random_unit_vectors(space, N, rng)
    else:
        vectors = _avoiding_start(space, N, avoid, rng)
    functionals = np.array([spaces.normalizing_functional(space, x) for x in vectors])
    current = _residual(vectors, functionals, level)

    iterations = 0
    for iterations in range(1, max_iters + 1):
        step_f = _bilinear_lp(vectors, ball_rows, level, "f")
        if step_f is None:
            break
        functionals = step_f

        bounds = None
        if avoid is not None:
            bounds = [
                (avoid, None) if value > 0 else (None, -avoid)
                for value in vectors.ravel()
            ]
        step_x = _bilinear_lp(functionals, dual_rows, level, "x", bounds)
        if step_x is None:
            break
        vectors = step_x

        value = _residual(vectors, functionals, level)
        if value <= success or current - value <= 1e-12 * max(current, 1.0):
            current = value
            break
        current = value
    return vectors, functionals, current, iterations


def _search_smooth(
    space: SpaceSpec,
    N: int,
    rng: np.random.Generator,
    max_iters: int,
) -> tuple[np.ndarray, np.ndarray, float, int]:
    level = N / space.dim
    n = space.dim
    complex_field = space.is_complex

    def unpack(z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        raw = z[: N * n].reshape(N, n)
        if complex_field:
            raw = raw + 1j * z[N * n :].reshape(N, n)
        vectors = raw / spaces.row_norms(space, raw)[:, None]
        functionals = np.array([spaces.normalizing_functional(space, x) for x in vectors])
        return vectors, functionals

    def residuals(z: np.ndarray) -> np.ndarray:
        vectors, functionals = unpack(z)
        M = vectors.T @ functionals - level * np.eye(n)
        if complex_field:
            return np.concatenate([M.real.ravel(), M.imag.ravel()])
        return M.real.ravel()

    start = spaces.random_unit_vectors(space, N, rng)
    z0 = (
        np.concatenate([start.real.ravel(), start.imag.ravel()])
        if complex_field
        else start.real.ravel()
    )
    result = least_squares(
        residuals, z0, ftol=1e-15, xtol=1e-15, gtol=1e-15, max_nfev=10 * max_iters
    )
    vectors, functionals = unpack(result.x)
    return vectors, functionals, _residual(vectors, functionals, level), int(result.nfev)


def search_funtf(
    space: SpaceSpec,
    N: int,
    seed: int | None = None,
    max_iters: int | None = None,
    restarts: int | None = None,
    avoid: float | None = None,
    threads: int | None = None,
) -> SearchReport:
    """
    Minimize R = ‖Σ fⱼ⊗xⱼ − (N/n)I‖²_F over normalized pairs from several
    seeded starts. Smooth norms pair each vector with its normalizing
    functional and run least squares; real polyhedral norms alternate exact
    LPs in the functionals and the vectors. avoid=δ keeps |xⱼₖ| ≥ δ for
    every coordinate (polyhedral spaces only). The vector LP is linear only
    once each coordinate has a sign, so a restart keeps the sign pattern of
    its random start throughout; different restarts draw different patterns,
    and more restarts explore more of them.
    """
    config = search_config.search_config
    seed = config["seed"] if seed is None else seed
    max_iters = config["max_iters"] if max_iters is None else max_iters
    restarts = config["restarts"] if restarts is None else restarts
    threads = settings.threads if threads is None else threads
    success = config["success_residual"]

    if N < space.dim:
        raise InvalidInputError(f"length {N} is below the dimension {space.dim}")
    if restarts < 1:
        raise InvalidInputError(f"restarts must be positive, got {restarts}")
    if space.is_polyhedral:
        method = "alternating_lp"
    elif space.is_smooth:
        method = "least_squares"
    else:
        raise UnsupportedSpaceError(f"no search method for {space.label()}")
    if avoid is not None and method != "alternating_lp":
        raise UnsupportedSpaceError("coordinate avoidance needs a real polyhedral space")
    if avoid is not None and not 0 < avoid * space.dim < 1:
        raise InvalidInputError(f"avoid must lie in (0, 1/n), got {avoid}")

    def run(child: np.random.SeedSequence) -> tuple[np.ndarray, np.ndarray, float, int]:
        rng = np.random.default_rng(child)
        if method == "alternating_lp":
            return _search_polyhedral(space, N, rng, max_iters, success, avoid)
        return _search_smooth(space, N, rng, max_iters)

    children = np.random.SeedSequence(seed).spawn(restarts)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, children))
    else:
        outcomes = []
        for child in children:
            outcomes.append(run(child))
            if outcomes[-1][2] <= success:
                break

    best = min(range(len(outcomes)), key=lambda k: (outcomes[k][2], k))
    vectors, functionals, residual, _ = outcomes[best]
    iterations = sum(outcome[3] for outcome in outcomes)
    found = residual <= success
    log = logger.info if found else logger.warning
    log(
        f"search_funtf {space.label()} N={N}: residual {residual:.3e} after "
        f"{len(outcomes)} restarts ({method})"
    )
    return SearchReport(
        success=found,
        residual=residual,
        length=N,
        seed=seed,
        restarts=len(outcomes),
        iterations=iterations,
        method=method,
        best=FrameSystem(space=space, vectors=vectors, functionals=functionals),
    )
