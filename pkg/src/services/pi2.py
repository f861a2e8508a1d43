"""
Pi2 Service for funtf-potential
2-summing norms as certified intervals, frame potentials and the
smoothness probe at the identity.

Upper bounds come from Pietsch measures: any probability w on points gᵢ of
the dual unit ball gives π₂(T)² ≤ sup_x ‖Tx‖² / Σ wᵢ|gᵢ(x)|². The right
side is convex in w and is minimized by a trust-region cutting plane
method over the simplex. Lower bounds come from admissible sequences,
found by an LP over a dictionary of directions and polished by
block-coordinate ascent.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, eigh
from scipy.optimize import linprog

from ..config.settings import settings, solver_config
from ..core.errors import DimensionMismatchError, InvalidInputError, UnsupportedSpaceError
from ..models.frame import FrameSystem, OperatorMatrix
from ..models.results import (
    AdmissibleSequence,
    FramePotential,
    PietschCertificate,
    Pi2Result,
    SmoothnessReport,
)
from ..models.space import SpaceSpec
from . import frames, spaces
from .erasure import operator_norm

logger = logging.getLogger(__name__)

# Cuts added per evaluation when the range has many dual vertices.
_MAX_CUTS_PER_STEP = 32
_MIN_RADIUS = 1e-10
# Mass kept on every dual point: w = (1 − δ)v + δ/M costs at most a factor 1/(1 − δ).
_WEIGHT_FLOOR = 1e-7
# Cuts from points where some wᵢ nearly vanishes have gradients ~ value/wᵢ;
# near the optimum every gradient entry stays within a small multiple of the value.
_MAX_CUT_RATIO = 1e6
_INITIAL_RADIUS = 0.25


def _operator(T: Any, domain: SpaceSpec, range_: SpaceSpec) -> np.ndarray:
    matrix = T.matrix if isinstance(T, OperatorMatrix) else np.asarray(T)
    if matrix.ndim != 2 or matrix.shape != (range_.dim, domain.dim):
        raise DimensionMismatchError(
            f"operator has shape {matrix.shape}, expected ({range_.dim}, {domain.dim})"
        )
    if np.iscomplexobj(matrix) and not (domain.is_complex or range_.is_complex):
        if np.any(matrix.imag != 0):
            raise InvalidInputError("complex operator between real spaces")
        matrix = matrix.real
    dtype = complex if (domain.is_complex or range_.is_complex) else float
    if not np.all(np.isfinite(matrix)):
        raise InvalidInputError("operator entries must be finite")
    return matrix.astype(dtype)


def default_seq_len(T: np.ndarray, complex_field: bool) -> int:
    """k(k+1)/2 over ℝ and k² over ℂ, with k = rank(T)."""
    k = max(1, int(np.linalg.matrix_rank(T)))
    return k * k if complex_field else k * (k + 1) // 2


def _modulo_sign(rows: np.ndarray) -> np.ndarray:
    keep = []
    for i, row in enumerate(rows):
        if not any(np.allclose(row, -rows[j], atol=1e-12) for j in keep):
            keep.append(i)
    return rows[keep]


def _is_exact(space: SpaceSpec) -> bool:
    """Real polyhedral and Hilbert spaces have exactly computable dual balls."""
    return space.is_polyhedral or space.is_hilbert


@dataclass
class _Evaluation:
    value: float
    cut_values: list[float]
    cut_grads: list[np.ndarray]
    maximizers: list[np.ndarray]


@dataclass
class _UpperBound:
    value: float
    certificate: PietschCertificate
    exact: bool
    iterations: int
    weights: np.ndarray
    maximizers: list[np.ndarray] = field(default_factory=list)


class _PietschProblem:
    """
    φ(w) = sup_x ‖Tx‖²_Y / xᴴ(G_w + εI)x with G_w = Σ wᵢ conj(gᵢ)gᵢᵀ and
    ε = c·tr(G_w). Every piece of the sup is convex in w, so each evaluation
    yields global linear minorants (cuts).
    """

    def __init__(
        self,
        T: np.ndarray,
        domain: SpaceSpec,
        range_: SpaceSpec,
        points: np.ndarray,
        regularization: float,
        seed: int,
    ):
        self.T = T
        self.domain = domain
        self.range = range_
        self.reg = regularization
        self.set_points(points)

        if range_.is_hilbert:
            metric = range_.scales**2
            self.range_matrix = np.conj(T).T @ (metric[:, None] * T)
            self.range_exact = True
            self.U = None
        else:
            dual = spaces.dual_extreme_points(range_, seed=seed)
            h = _modulo_sign(dual.vertices)
            self.U = np.conj(T.T @ h.T)
            self.range_exact = dual.exhaustive

    def set_points(self, points: np.ndarray) -> None:
        self.points = points
        self.outer = np.conj(points)[:, :, None] * points[:, None, :]
        self.sqnorm = np.sum(np.abs(points) ** 2, axis=1)
        uniform = np.full(len(points), 1.0 / len(points))
        self.uniform_floor = float(
            np.linalg.eigvalsh(np.einsum("i,ijk->jk", uniform, self.outer)).min()
        )
        if self.uniform_floor <= 0:
            raise UnsupportedSpaceError("dual points do not span the domain")

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    def gram(self, w: np.ndarray) -> tuple[np.ndarray, float]:
        G = np.einsum("i,ijk->jk", w, self.outer)
        eps = self.reg * float(np.real(np.trace(G)))
        return G + eps * np.eye(G.shape[0]), eps

    def evaluate(self, w: np.ndarray) -> _Evaluation:
        G, _ = self.gram(w)
        if self.U is not None:
            try:
                Z = cho_solve(cho_factor(G), self.U)
            except LinAlgError:
                Z = np.linalg.pinv(G, hermitian=True) @ self.U
            values = np.real(np.sum(np.conj(self.U) * Z, axis=0))
            order = np.argsort(values)[::-1][:_MAX_CUTS_PER_STEP]
            vectors = [Z[:, k] for k in order]
            piece_values = [float(values[k]) for k in order]
        else:
            eigvals, eigvecs = eigh(self.range_matrix, G)
            top = float(eigvals[-1])
            chosen = [
                k
                for k in range(len(eigvals) - 1, -1, -1)
                if eigvals[k] >= top * (1.0 - 1e-6) or k == len(eigvals) - 1
            ][:_MAX_CUTS_PER_STEP]
            vectors = [eigvecs[:, k] for k in chosen]
            piece_values = [top for _ in chosen]

        grads = []
        for x, value in zip(vectors, piece_values, strict=True):
            quad = np.abs(self.points @ x) ** 2 + self.reg * self.sqnorm * float(
                np.sum(np.abs(x) ** 2)
            )
            if self.U is None:
                # Pieces of the form xᴴAx / xᴴGx at a G-normalized x.
                grads.append(-value * quad)
            else:
                grads.append(-quad)
        return _Evaluation(
            value=max(piece_values),
            cut_values=piece_values,
            cut_grads=grads,
            maximizers=vectors,
        )

    def certify(self, w: np.ndarray, value: float) -> tuple[float, np.ndarray]:
        """
        Move the ε-regularization into the measure: mixing in the uniform
        weights with θ = ε/(λ_min + ε) gives a genuine Pietsch measure whose
        unregularized value is at most (1 + ε/λ_min)·φ(w).
        """
        _, eps = self.gram(w)
        theta = eps / (self.uniform_floor + eps)
        mixed = (1.0 - theta) * w + theta / self.size
        mixed = mixed / mixed.sum()
        return value * (1.0 + eps / self.uniform_floor), mixed


def _cutting_plane(
    problem: _PietschProblem,
    max_iters: int,
    tol_value: float,
    start: np.ndarray | None = None,
) -> tuple[np.ndarray, float, int, list[np.ndarray]]:
    M = problem.size
    floor = _WEIGHT_FLOOR / M
    w = np.full(M, 1.0 / M) if start is None else start.copy()
    w = (1.0 - _WEIGHT_FLOOR) * w / w.sum() + floor
    evaluation = problem.evaluate(w)
    best_w, best_value = w, evaluation.value
    maximizers = list(evaluation.maximizers)

    rows: list[np.ndarray] = []
    rhs: list[float] = []

    def add_cuts(at: np.ndarray, ev: _Evaluation, screen: bool = True) -> int:
        added = 0
        for value, grad in zip(ev.cut_values, ev.cut_grads, strict=True):
            if screen and np.max(np.abs(grad)) > _MAX_CUT_RATIO * max(abs(value), 1e-300):
                continue
            rows.append(np.concatenate([grad, [-1.0]]))
            rhs.append(float(grad @ at) - value)
            added += 1
        return added

    add_cuts(w, evaluation, screen=False)
    radius = _INITIAL_RADIUS
    objective = np.zeros(M + 1)
    objective[-1] = 1.0
    equality = np.concatenate([np.ones(M), [0.0]])[None, :]
    iterations = 0

    for iterations in range(1, max_iters + 1):
        bounds = [
            (max(floor, best_w[i] - radius), min(1.0, best_w[i] + radius))
            for i in range(M)
        ] + [(None, None)]
        result = linprog(
            objective,
            A_ub=np.array(rows),
            b_ub=np.array(rhs),
            A_eq=equality,
            b_eq=[1.0],
            bounds=bounds,
            method="highs",
        )
        if result.status != 0:
            radius *= 0.5
            logger.debug(f"Cutting plane LP failed ({result.message}); radius {radius:.3g}")
            if radius < _MIN_RADIUS:
                logger.warning(f"Cutting plane LP stopped: {result.message}")
                break
            continue

        candidate = np.clip(result.x[:M], floor, None)
        candidate /= candidate.sum()
        predicted = best_value - float(result.x[M])
        if predicted <= tol_value * min(radius, 1.0):
            break

        evaluation = problem.evaluate(candidate)
        add_cuts(candidate, evaluation)
        maximizers = list(evaluation.maximizers) + maximizers[: 4 * _MAX_CUTS_PER_STEP]
        actual = best_value - evaluation.value

        if actual >= 0.1 * predicted:
            best_w, best_value = candidate, evaluation.value
            if actual >= 0.5 * predicted:
                radius = min(2.0 * radius, 1.0)
        else:
            radius *= 0.5
            if radius < _MIN_RADIUS:
                break

    logger.debug(
        f"Cutting plane finished after {iterations} iterations at {best_value:.12g}"
    )
    return best_w, best_value, iterations, maximizers


def _domain_points(domain: SpaceSpec, seed: int) -> tuple[np.ndarray, bool]:
    dual = spaces.dual_extreme_points(domain, seed=seed)
    return _modulo_sign(dual.vertices), dual.exhaustive


def _upper_bound(
    T: np.ndarray,
    domain: SpaceSpec,
    range_: SpaceSpec,
    max_iters: int,
    tol_value: float,
    seed: int,
    problem: _PietschProblem | None = None,
    start: np.ndarray | None = None,
) -> tuple[_UpperBound, _PietschProblem]:
    if problem is None:
        points, _ = _domain_points(domain, seed)
        problem = _PietschProblem(
            T, domain, range_, points, solver_config.pi2_config["regularization"], seed
        )
    w, value, iterations, maximizers = _cutting_plane(
        problem, max_iters, tol_value, start
    )
    certified_value, mixed = problem.certify(w, value)
    certificate = PietschCertificate(vertices=problem.points, weights=mixed)
    return (
        _UpperBound(
            value=math.sqrt(max(certified_value, 0.0)),
            certificate=certificate,
            exact=problem.range_exact,
            iterations=iterations,
            weights=w,
            maximizers=maximizers,
        ),
        problem,
    )


# Lower bounds


def _active_functional(
    domain: SpaceSpec, X: np.ndarray, points: np.ndarray
) -> tuple[float, np.ndarray]:
    """The admissibility constant of X and a dual point attaining it."""
    if domain.is_hilbert:
        z = X * domain.scales
        eigvals, eigvecs = np.linalg.eigh(z.T @ np.conj(z))
        return float(eigvals[-1]), domain.scales * np.conj(eigvecs[:, -1])
    values = np.sum(np.abs(points @ X.T) ** 2, axis=1)
    k = int(np.argmax(values))
    return float(values[k]), points[k]


def _image_energy(T: np.ndarray, range_: SpaceSpec, X: np.ndarray) -> float:
    return float(np.sum(spaces.row_norms(range_, X @ T.T) ** 2))


def _ratio(
    T: np.ndarray, domain: SpaceSpec, range_: SpaceSpec, X: np.ndarray, points: np.ndarray
) -> float:
    constant, _ = _active_functional(domain, X, points)
    if constant <= 0:
        return 0.0
    return _image_energy(T, range_, X) / constant


def _ascend(
    T: np.ndarray,
    domain: SpaceSpec,
    range_: SpaceSpec,
    X: np.ndarray,
    points: np.ndarray,
    sweeps: int,
) -> np.ndarray:
    """Block-coordinate ascent on Σ‖Txᵢ‖² / max_g Σ|g(xᵢ)|²."""
    X = X.copy()
    current = _ratio(T, domain, range_, X, points)
    for _ in range(sweeps):
        start_value = current
        for i in range(X.shape[0]):
            x = X[i]
            y = T @ x
            size = spaces.norm(range_, y)
            energy = _image_energy(T, range_, X)
            constant, g = _active_functional(domain, X, points)
            if constant <= 0:
                return X
            grad_energy = np.zeros_like(x)
            if size > 0:
                J = spaces.normalizing_functional(range_, y)
                grad_energy = 2.0 * size * np.conj(T.T @ J)
            grad_constant = 2.0 * (g @ x) * np.conj(g)
            direction = grad_energy / constant - energy * grad_constant / constant**2
            length = float(np.linalg.norm(direction))
            if length == 0:
                continue
            scale = max(float(np.linalg.norm(x)), 1e-3) / length
            step = 0.5
            while step > 1e-6:
                trial = X.copy()
                trial[i] = x + step * scale * direction
                value = _ratio(T, domain, range_, trial, points)
                if value > current * (1.0 + 1e-14):
                    X, current = trial, value
                    break
                step *= 0.5
        if current <= start_value * (1.0 + 1e-10):
            break
    return X


def _dictionary(
    T: np.ndarray,
    domain: SpaceSpec,
    maximizers: list[np.ndarray],
    gram: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    n = domain.dim
    complex_field = domain.is_complex or np.iscomplexobj(T)
    base = [np.asarray(v) for v in maximizers]

    eigvals, eigvecs = np.linalg.eigh(gram)
    inv_root = (eigvecs / np.sqrt(np.maximum(eigvals, 1e-300))) @ np.conj(eigvecs).T
    _, _, vh = np.linalg.svd(T @ inv_root)
    base.extend(inv_root @ np.conj(vh).T[:, k] for k in range(vh.shape[0]))
    base.extend(np.eye(n))
    if domain.is_polyhedral:
        base.extend(spaces.unit_ball_vertices(domain)[:256])

    seeds = [b / max(spaces.norm(domain, b), 1e-300) for b in base[:24] if np.any(b)]
    for i in range(len(seeds)):
        for j in range(i + 1, len(seeds)):
            base.append(seeds[i] + seeds[j])
            base.append(seeds[i] - seeds[j])
    base.extend(spaces.random_unit_vectors(domain, 32, rng))

    rows = np.array([b for b in base if np.any(b)], dtype=complex if complex_field else float)
    rows = rows / spaces.row_norms(domain, rows)[:, None]
    return _modulo_sign_fast(rows)


def _modulo_sign_fast(rows: np.ndarray) -> np.ndarray:
    keys = np.round(rows, 10)
    flip = np.array([_sign_of_leading(k) for k in keys])
    canonical = keys * flip[:, None] + 0.0
    if np.iscomplexobj(canonical):
        canonical = np.concatenate([canonical.real, canonical.imag], axis=1) + 0.0
    _, index = np.unique(canonical, axis=0, return_index=True)
    return rows[np.sort(index)]


def _sign_of_leading(row: np.ndarray) -> float:
    nonzero = np.flatnonzero(np.abs(row) > 0)
    if nonzero.size == 0:
        return 1.0
    lead = row[nonzero[0]]
    return -1.0 if np.real(lead) < 0 or (np.real(lead) == 0 and np.imag(lead) < 0) else 1.0


def _dictionary_lp(
    T: np.ndarray,
    range_: SpaceSpec,
    directions: np.ndarray,
    points: np.ndarray,
) -> np.ndarray:
    """max Σ sₖ‖Tdₖ‖² subject to Σ sₖ|g(dₖ)|² ≤ 1 for every dual point g."""
    gains = spaces.row_norms(range_, directions @ T.T) ** 2
    if not np.any(gains > 0):
        return directions[:1] * 0.0
    constraints = np.abs(points @ directions.T) ** 2
    result = linprog(
        -gains,
        A_ub=constraints,
        b_ub=np.ones(len(points)),
        bounds=[(0.0, None)] * len(directions),
        method="highs",
    )
    if result.status != 0:
        logger.warning(f"Dictionary LP failed: {result.message}")
        k = int(np.argmax(gains))
        return directions[k : k + 1]
    weights = np.clip(result.x, 0.0, None)
    keep = weights > 1e-14 * max(weights.max(), 1e-300)
    return np.sqrt(weights[keep])[:, None] * directions[keep]


def _rescale(
    domain: SpaceSpec, X: np.ndarray, tolerance: float
) -> tuple[np.ndarray, bool, float]:
    """Scale X onto the admissible set; returns (X, exact, relative violation)."""
    constant, exact = spaces.admissibility_constant(domain, X)
    if constant <= 0:
        return X, exact, 0.0
    X = X / math.sqrt(constant)
    check, exact = spaces.admissibility_constant(domain, X)
    if check > 1.0 + tolerance:
        X = X / math.sqrt(check)
        check, exact = spaces.admissibility_constant(domain, X)
    return X, exact, max(check - 1.0, 0.0)


def _lower_bound(
    T: np.ndarray,
    domain: SpaceSpec,
    range_: SpaceSpec,
    maximizers: list[np.ndarray],
    gram: np.ndarray,
    seq_len: int,
    restarts: int,
    sweeps: int,
    seed: int,
    tolerance: float,
) -> tuple[float, AdmissibleSequence]:
    rng = np.random.default_rng(seed)
    points, _ = _domain_points(domain, seed)

    directions = _dictionary(T, domain, maximizers, gram, rng)
    start = _dictionary_lp(T, range_, directions, points)
    if start.shape[0] < seq_len:
        padding = 1e-3 * spaces.random_unit_vectors(domain, seq_len - start.shape[0], rng)
        start = np.vstack([start, padding])
    start, _, _ = _rescale(domain, start, tolerance)

    candidates = [start]
    best = _ascend(T, domain, range_, start, points, sweeps)
    candidates.append(best)
    for _ in range(max(0, restarts - 1)):
        noise = rng.standard_normal(best.shape)
        if np.iscomplexobj(best):
            noise = noise + 1j * rng.standard_normal(best.shape)
        perturbed = best + 0.1 * np.linalg.norm(best) / np.sqrt(best.size) * noise
        candidates.append(_ascend(T, domain, range_, perturbed, points, sweeps))

    best_value, best_seq, best_exact, best_violation = -1.0, start, True, 0.0
    for X in candidates:
        X, exact, violation = _rescale(domain, X, tolerance)
        value = _image_energy(T, range_, X)
        if value > best_value:
            best_value, best_seq = value, X
            best_exact, best_violation = exact, violation

    sequence = AdmissibleSequence(
        space=domain, vectors=best_seq, max_violation=best_violation, exact=best_exact
    )
    return math.sqrt(max(best_value, 0.0)), sequence


# Public operations


def pi2_lower(
    T: Any,
    domain: SpaceSpec,
    range_: SpaceSpec | None = None,
    seq_len: int | None = None,
    restarts: int | None = None,
    seed: int | None = None,
    certificate: PietschCertificate | None = None,
) -> tuple[float, AdmissibleSequence]:
    """
    A feasible value of sup Σ‖Txᵢ‖² over admissible sequences (square
    rooted) together with the witness sequence. Feasibility is restored by
    rescaling the whole sequence.
    """
    range_ = domain if range_ is None else range_
    T = _operator(T, domain, range_)
    config = solver_config.pi2_config
    restarts = config["restarts"] if restarts is None else restarts
    seed = settings.seed if seed is None else seed
    if seq_len is None:
        seq_len = default_seq_len(T, domain.is_complex or range_.is_complex)
    if seq_len < 1:
        raise InvalidInputError(f"seq_len must be positive, got {seq_len}")

    if not np.any(T):
        zero = AdmissibleSequence(space=domain, vectors=np.zeros((1, domain.dim)))
        return 0.0, zero

    if certificate is not None:
        points, weights = certificate.vertices, certificate.weights
    else:
        points, _ = _domain_points(domain, seed)
        weights = np.full(len(points), 1.0 / len(points))
    problem = _PietschProblem(T, domain, range_, points, config["regularization"], seed)
    gram, _ = problem.gram(weights)
    maximizers = problem.evaluate(weights).maximizers
    return _lower_bound(
        T, domain, range_, maximizers, gram, seq_len, restarts,
        config["ascent_iters"], seed, config["admissibility_tol"],
    )


def pi2_upper(
    T: Any,
    domain: SpaceSpec,
    range_: SpaceSpec | None = None,
    max_iters: int | None = None,
    tol: float | None = None,
    seed: int | None = None,
) -> tuple[float, PietschCertificate]:
    """
    min over Pietsch weights w of sup_x ‖Tx‖/(Σ wᵢ|gᵢ(x)|²)^{1/2}. The
    value is a valid upper bound whenever the inner sup is exact (real
    polyhedral or Hilbert range).
    """
    range_ = domain if range_ is None else range_
    T = _operator(T, domain, range_)
    config = solver_config.pi2_config
    max_iters = config["max_iters"] if max_iters is None else max_iters
    tol = config["tol"] if tol is None else tol
    seed = settings.seed if seed is None else seed
    if not range_.is_hilbert and not range_.is_polyhedral:
        logger.warning(
            f"Inner maximization over {range_.label()} is sampled; upper bound is heuristic"
        )
    upper, _ = _upper_bound(T, domain, range_, max_iters, tol, seed)
    return upper.value, upper.certificate


def _hilbert_result(T: np.ndarray, domain: SpaceSpec, range_: SpaceSpec) -> Pi2Result:
    weighted = (range_.scales[:, None] * T) / domain.scales[None, :]
    value = float(np.linalg.norm(weighted))
    witness = AdmissibleSequence(
        space=domain, vectors=np.diag(1.0 / domain.scales).astype(T.dtype)
    )
    return Pi2Result(
        lower=value,
        upper=value,
        witness=witness,
        certified=True,
        lower_source="frobenius",
        method="frobenius",
    )


def pi2(
    T: Any,
    domain: SpaceSpec,
    range_: SpaceSpec | None = None,
    tol: float | None = None,
    seed: int | None = None,
    max_iters: int | None = None,
    rounds: int | None = None,
) -> Pi2Result:
    """
    π₂(T : X → Y) as an interval [lower, upper]. Hilbert-to-Hilbert maps
    return the Hilbert-Schmidt norm exactly; otherwise upper and lower
    bounds alternate until upper − lower ≤ tol or the round cap is hit.
    """
    range_ = domain if range_ is None else range_
    T = _operator(T, domain, range_)
    config = solver_config.pi2_config
    tol = config["tol"] if tol is None else tol
    if tol <= 0:
        raise InvalidInputError(f"tol must be positive, got {tol}")
    seed = settings.seed if seed is None else seed
    max_iters = config["max_iters"] if max_iters is None else max_iters
    rounds = config["rounds"] if rounds is None else rounds
    relative_gap = config["relative_gap"]

    if domain.is_hilbert and range_.is_hilbert:
        return _hilbert_result(T, domain, range_)

    scale = float(np.max(np.abs(T)))
    if scale == 0.0:
        zero = AdmissibleSequence(space=domain, vectors=np.zeros((1, domain.dim)))
        return Pi2Result(lower=0.0, upper=0.0, witness=zero, certified=True)
    Tn = T / scale
    tol_n = tol / scale
    seq_len = default_seq_len(Tn, domain.is_complex or range_.is_complex)
    exact_domain = _is_exact(domain)

    norm_witness = operator_norm(Tn, domain, range_, seed=seed)
    lower = norm_witness.value
    violation = 0.0
    if norm_witness.argmax is not None:
        single = np.atleast_2d(norm_witness.argmax)
        constant, _ = spaces.admissibility_constant(domain, single)
        violation = max(constant - 1.0, 0.0)
    else:
        single = np.zeros((1, domain.dim))
    # A single unit vector is admissible in every space.
    witness = AdmissibleSequence(
        space=domain, vectors=single, max_violation=violation, exact=True
    )
    lower_source = "witness"

    trace_bound = 0.0
    if domain == range_:
        trace_bound = abs(np.trace(Tn)) / math.sqrt(domain.dim)

    upper_bound: _UpperBound | None = None
    problem: _PietschProblem | None = None
    total_iterations = 0
    for round_index in range(rounds):
        round_seed = seed + round_index
        # Stop the cutting plane once the interval width it controls is below tol.
        tol_value = tol_n * max(lower, trace_bound, 1e-12)
        upper_bound, problem = _upper_bound(
            Tn,
            domain,
            range_,
            max_iters,
            tol_value,
            round_seed,
            problem=problem,
            start=upper_bound.weights if upper_bound is not None else None,
        )
        total_iterations += upper_bound.iterations

        if upper_bound.value - max(lower, trace_bound) > tol_n:
            gram, _ = problem.gram(upper_bound.weights)
            value, sequence = _lower_bound(
                Tn,
                domain,
                range_,
                upper_bound.maximizers,
                gram,
                seq_len,
                config["restarts"],
                config["ascent_iters"],
                round_seed,
                config["admissibility_tol"],
            )
            if value > lower:
                lower, witness, lower_source = value, sequence, "witness"

        best_lower = max(lower, trace_bound)
        logger.info(
            f"pi2 round {round_index + 1}: [{best_lower * scale:.10g}, "
            f"{upper_bound.value * scale:.10g}]"
        )
        if upper_bound.value - best_lower <= max(tol_n, relative_gap * upper_bound.value):
            break
        if not exact_domain:
            # Enrich the sampled dual points with the witness' active functional.
            _, g = _active_functional(domain, witness.vectors, problem.points)
            g = g / spaces.dual_norm(domain, g)
            problem.set_points(np.vstack([problem.points, g[None, :]]))
            upper_bound.weights = np.append(upper_bound.weights, 0.0)

    assert upper_bound is not None
    if trace_bound > lower:
        lower, lower_source = trace_bound, "trace_duality"

    upper = upper_bound.value
    heuristic_upper = not upper_bound.exact
    if lower > upper:
        if heuristic_upper:
            upper = lower
        else:
            lower = upper

    certified = (
        exact_domain
        and _is_exact(range_)
        and witness.exact
        and witness.max_violation <= config["admissibility_tol"]
        and upper - lower <= tol_n
    )
    result = Pi2Result(
        lower=lower * scale,
        upper=upper * scale,
        witness=witness,
        certificate=upper_bound.certificate,
        certified=certified,
        heuristic_upper=heuristic_upper,
        lower_source=lower_source,
        iterations=total_iterations,
    )
    if not certified:
        logger.warning(
            f"pi2 interval [{result.lower:.10g}, {result.upper:.10g}] not certified "
            f"({domain.label()} -> {range_.label()})"
        )
    return result


def frame_potential(frame: FrameSystem, tol: float | None = None) -> FramePotential:
    """FP = π₂(S)², squaring both ends of the interval for the frame operator."""
    operator = frames.frame_operator(frame)
    result = pi2(operator.matrix, frame.space, frame.space, tol=tol)
    return FramePotential(
        lower=result.lower**2,
        upper=result.upper**2,
        certified=result.certified,
        length=frame.length,
        dim=frame.dim,
        pi2=result,
    )


def smoothness_gap(
    S: Any, space: SpaceSpec, tol: float | None = None
) -> tuple[float, float]:
    """
    √n − Re tr(S)/π₂(S) using the lower end of the interval (the largest
    possible normalized trace), and the least Frobenius distance from
    S/π₂(S) to I/√n over the interval.
    """
    matrix = _operator(S, space, space)
    n = space.dim
    result = pi2(matrix, space, space, tol=tol)
    target = np.eye(n) / math.sqrt(n)
    trace = float(np.real(np.trace(matrix)))
    if result.lower <= 0:
        return math.sqrt(n), float(np.linalg.norm(target))
    gap = math.sqrt(n) - trace / result.lower if trace > 0 else math.sqrt(n)

    size = float(np.real(np.vdot(matrix, matrix)))
    best = float(np.real(np.vdot(matrix, target))) / size
    c = min(max(best, 1.0 / result.upper), 1.0 / result.lower)
    distance = float(np.linalg.norm(c * matrix - target))
    return gap, distance


def smoothness_probe(
    space: SpaceSpec,
    trials: int,
    seed: int | None = None,
    tol: float | None = None,
    min_distance: float = 0.1,
) -> SmoothnessReport:
    """
    Sample S with π₂(S) = 1 away from I/√n and check tr(S) < √n, the
    strict maximality of the trace at the identity.
    """
    if not _is_exact(space):
        raise UnsupportedSpaceError(
            f"smoothness_probe needs a certified pi2 on {space.label()}"
        )
    if trials < 1:
        raise InvalidInputError(f"trials must be positive, got {trials}")
    seed = settings.seed if seed is None else seed
    rng = np.random.default_rng(seed)
    n = space.dim

    gaps: list[float] = []
    distances: list[float] = []
    attempts = 0
    while len(gaps) < trials and attempts < 20 * trials:
        attempts += 1
        E = rng.standard_normal((n, n))
        if space.is_complex:
            E = E + 1j * rng.standard_normal((n, n))
        E /= np.linalg.norm(E)
        S = np.eye(n) / math.sqrt(n) + rng.uniform(0.25, 0.75) * E
        gap, distance = smoothness_gap(S, space, tol=tol)
        if distance < min_distance:
            continue
        gaps.append(gap)
        distances.append(distance)

    min_gap = min(gaps) if gaps else math.nan
    logger.info(f"Smoothness probe on {space.label()}: min gap {min_gap:.6g}")
    return SmoothnessReport(
        space=space,
        trials=len(gaps),
        gaps=gaps,
        distances=distances,
        min_gap=min_gap,
        all_positive=bool(gaps) and all(g > 0 for g in gaps),
    )
