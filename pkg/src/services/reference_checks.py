"""
Reference Checks for funtf-potential
Executable suite of the published numbers: naive-potential counterexamples,
identity 2-summing norms, frame potentials, explicit constructions, the
parity obstruction on ℓ₁² and one-erasure optimality.
"""

import logging
import math
import time
from collections.abc import Callable, Iterable

import numpy as np

from ..core.errors import InvalidInputError
from ..models.frame import FrameSystem
from ..models.results import CheckResult, ReferenceReport
from ..models.space import SpaceSpec
from . import construct, erasure, frames, pi2, spaces

logger = logging.getLogger(__name__)

_CHECKS: dict[str, tuple[str, Callable[[], CheckResult]]] = {}


def _check(check_id: str, description: str) -> Callable:
    def register(func: Callable[[str, str], CheckResult]) -> Callable:
        _CHECKS[check_id] = (description, lambda: func(check_id, description))
        return func

    return register


def _close(
    check_id: str, description: str, observed: float, expected: float, tolerance: float
) -> CheckResult:
    return CheckResult(
        check_id=check_id,
        description=description,
        observed=observed,
        expected=expected,
        tolerance=tolerance,
        passed=abs(observed - expected) <= tolerance,
    )


def _operator_distance(frame: FrameSystem, target: np.ndarray) -> float:
    return float(np.linalg.norm(frames.frame_operator(frame).matrix - target))


def _tight_check(
    check_id: str, description: str, frame: FrameSystem, tolerance: float
) -> CheckResult:
    level = frame.length / frame.dim
    distance = _operator_distance(frame, level * np.eye(frame.dim))
    normalized = frames.is_normalized(frame)
    return CheckResult(
        check_id=check_id,
        description=description,
        observed={"distance": distance, "normalized": normalized},
        expected={"level": level},
        tolerance=tolerance,
        passed=normalized and distance <= tolerance,
    )


def _identity_pi2(
    check_id: str, description: str, space: SpaceSpec, width: float = 1e-3
) -> CheckResult:
    result = pi2.pi2(np.eye(space.dim), space, space, tol=1e-4)
    target = math.sqrt(space.dim)
    return CheckResult(
        check_id=check_id,
        description=description,
        observed={"lower": result.lower, "upper": result.upper, "certified": result.certified},
        expected=target,
        tolerance=width,
        passed=(
            result.certified
            and result.lower - 1e-12 <= target <= result.upper + 1e-12
            and result.gap <= width
        ),
    )


@_check("frameFail-sq", "Σ|fⱼ(xₖ)|² of the ℓ₁² FUNTF")
def _frame_fail_sq(check_id: str, description: str) -> CheckResult:
    value = frames.naive_potential_sq(frames.counterexample_frames()["x"])
    return _close(check_id, description, value, 45 / 8, 1e-12)


@_check("frameFail-sq-y", "Σ|fⱼ(xₖ)|² of the non-tight y-frame")
def _frame_fail_sq_y(check_id: str, description: str) -> CheckResult:
    value = frames.naive_potential_sq(frames.counterexample_frames()["y"])
    return _close(check_id, description, value, 11 / 2, 1e-12)


@_check("frameFail-sym", "Σ|fⱼ(xₖ)fₖ(xⱼ)| of the ℓ₁² FUNTF")
def _frame_fail_sym(check_id: str, description: str) -> CheckResult:
    value = frames.naive_potential_sym(frames.counterexample_frames()["x"])
    return _close(check_id, description, value, 9 / 2, 1e-12)


@_check("frameFail-sym-z", "Σ|fⱼ(xₖ)fₖ(xⱼ)| of the non-tight z-frame")
def _frame_fail_sym_z(check_id: str, description: str) -> CheckResult:
    value = frames.naive_potential_sym(frames.counterexample_frames()["z"])
    return _close(check_id, description, value, 4.0, 1e-12)


@_check("x-frame-operator", "frame operator of the ℓ₁² FUNTF is (3/2)I")
def _x_frame_operator(check_id: str, description: str) -> CheckResult:
    frame = frames.counterexample_frames()["x"]
    return _tight_check(check_id, description, frame, 1e-12)


@_check("y-frame-operator", "frame operator of the y-frame is diag(2, 1)")
def _y_frame_operator(check_id: str, description: str) -> CheckResult:
    frame = frames.counterexample_frames()["y"]
    distance = _operator_distance(frame, np.diag([2.0, 1.0]))
    return _close(check_id, description, distance, 0.0, 1e-12)


@_check("y-frame-not-funtf", "the y-frame is an approximate frame, not a FUNTF")
def _y_frame_kind(check_id: str, description: str) -> CheckResult:
    kind = frames.classify(frames.counterexample_frames()["y"]).kind
    return CheckResult(
        check_id=check_id,
        description=description,
        observed=kind,
        expected="approximate",
        passed=kind == "approximate",
    )


@_check("norm-l1-2", "‖(1/4, −3/4)‖ on real ℓ₁² is 1")
def _norm_l1(check_id: str, description: str) -> CheckResult:
    value = spaces.norm(SpaceSpec.lp(2, 1), [0.25, -0.75])
    return _close(check_id, description, value, 1.0, 1e-15)


@_check("dual-norm-l1-2", "the functional (1, −1) has norm 1 on real ℓ₁²")
def _dual_norm_l1(check_id: str, description: str) -> CheckResult:
    value = spaces.dual_norm(SpaceSpec.lp(2, 1), [1.0, -1.0])
    return _close(check_id, description, value, 1.0, 1e-15)


@_check("normalizing-functional-l1-2", "(1/4, −3/4) on real ℓ₁² is normed by (1, −1)")
def _normalizing_l1(check_id: str, description: str) -> CheckResult:
    f = spaces.normalizing_functional(SpaceSpec.lp(2, 1), [0.25, -0.75])
    distance = float(np.max(np.abs(f - np.array([1.0, -1.0]))))
    return CheckResult(
        check_id=check_id,
        description=description,
        observed=[float(v) for v in np.real(f)],
        expected=[1.0, -1.0],
        tolerance=1e-12,
        passed=distance <= 1e-12,
    )


@_check("trace-bound-x-frame", "|Σ fⱼ(xⱼ)|²/n of the ℓ₁² FUNTF is 9/2")
def _trace_bound_x(check_id: str, description: str) -> CheckResult:
    value = frames.trace_lower_bound(frames.counterexample_frames()["x"])
    return _close(check_id, description, value, 4.5, 1e-12)


@_check("pi2-identity-l1-2", "π₂(I) on real ℓ₁² is √2")
def _pi2_l1_2(check_id: str, description: str) -> CheckResult:
    return _identity_pi2(check_id, description, SpaceSpec.lp(2, 1))


@_check("pi2-identity-l1-3", "π₂(I) on real ℓ₁³ is √3")
def _pi2_l1_3(check_id: str, description: str) -> CheckResult:
    return _identity_pi2(check_id, description, SpaceSpec.lp(3, 1))


@_check("pi2-identity-linf-2", "π₂(I) on real ℓ∞² is √2")
def _pi2_linf_2(check_id: str, description: str) -> CheckResult:
    return _identity_pi2(check_id, description, SpaceSpec.lp(2, "inf"))


@_check("potential-x-frame", "frame potential of the ℓ₁² FUNTF is N²/n = 9/2")
def _potential_x(check_id: str, description: str) -> CheckResult:
    potential = pi2.frame_potential(frames.counterexample_frames()["x"], tol=1e-5)
    return CheckResult(
        check_id=check_id,
        description=description,
        observed={"lower": potential.lower, "upper": potential.upper},
        expected=4.5,
        tolerance=2e-3,
        passed=potential.lower >= 4.5 - 2e-3 and potential.upper <= 4.5 + 2e-3,
    )


@_check("potential-y-frame", "frame potential of the y-frame exceeds 9/2")
def _potential_y(check_id: str, description: str) -> CheckResult:
    potential = pi2.frame_potential(frames.counterexample_frames()["y"], tol=1e-5)
    return CheckResult(
        check_id=check_id,
        description=description,
        observed={"lower": potential.lower, "upper": potential.upper},
        expected="> 4.501",
        tolerance=1e-3,
        passed=potential.lower > 4.5 + 1e-3,
    )


@_check("dft-real-l1-2", "sign version of the harmonic frame on real ℓ₁² with λ = (1, 1)")
def _dft_real(check_id: str, description: str) -> CheckResult:
    frame = construct.dft_funtf(SpaceSpec.lp(2, 1), [1.0, 1.0])
    return _tight_check(check_id, description, frame, 1e-12)


@_check("dft-complex-l1-3", "harmonic frame on complex ℓ₁³ has operator I")
def _dft_complex(check_id: str, description: str) -> CheckResult:
    frame = construct.dft_funtf(SpaceSpec.lp(3, 1, field="complex"))
    return _tight_check(check_id, description, frame, 1e-10)


@_check("length-complex-l1-2-3", "length-3 FUNTF on complex ℓ₁²")
def _length_complex(check_id: str, description: str) -> CheckResult:
    frame = construct.funtf_of_length(SpaceSpec.lp(2, 1, field="complex"), 3)
    return _tight_check(check_id, description, frame, 1e-8)


@_check("ell1-n+1-3", "length-4 FUNTF on real ℓ₁³ with a = 1/3")
def _ell1_n_plus_1_3(check_id: str, description: str) -> CheckResult:
    result = _tight_check(check_id, description, construct.ell1_funtf_n_plus_1(3), 1e-10)
    parameter_ok = abs(construct.ell1_parameter(3) - 1 / 3) <= 1e-15
    return result.model_copy(update={"passed": result.passed and parameter_ok})


@_check("ell1-n+1-4", "length-5 FUNTF on real ℓ₁⁴ with a = 7/16")
def _ell1_n_plus_1_4(check_id: str, description: str) -> CheckResult:
    result = _tight_check(check_id, description, construct.ell1_funtf_n_plus_1(4), 1e-10)
    parameter_ok = abs(construct.ell1_parameter(4) - 7 / 16) <= 1e-15
    return result.model_copy(update={"passed": result.passed and parameter_ok})


@_check("ell1-3-5", "length-5 FUNTF on real ℓ₁³, operator (5/3)I")
def _ell1_3_5(check_id: str, description: str) -> CheckResult:
    return _tight_check(check_id, description, construct.ell1_special(3, 5), 1e-12)


@_check("ell1-4-6", "length-6 FUNTF on real ℓ₁⁴, operator (3/2)I")
def _ell1_4_6(check_id: str, description: str) -> CheckResult:
    return _tight_check(check_id, description, construct.ell1_special(4, 6), 1e-12)


@_check("ell1-4-7", "length-7 FUNTF on real ℓ₁⁴, operator (7/4)I")
def _ell1_4_7(check_id: str, description: str) -> CheckResult:
    return _tight_check(check_id, description, construct.ell1_special(4, 7), 1e-12)


@_check(
    "parity-l1-2",
    "length-3 search on real ℓ₁² fails away from ±e₁, ±e₂ and succeeds otherwise",
)
def _parity(check_id: str, description: str) -> CheckResult:
    space = SpaceSpec.lp(2, 1)
    restricted = [
        construct.search_funtf(space, 3, seed=seed, restarts=2, avoid=0.05).residual
        for seed in range(64)
    ]
    free = construct.search_funtf(space, 3, seed=0)
    return CheckResult(
        check_id=check_id,
        description=description,
        observed={"min_restricted_residual": min(restricted), "free_success": free.success},
        expected={"min_restricted_residual": ">= 1e-3", "free_success": True},
        tolerance=1e-3,
        passed=min(restricted) >= 1e-3 and free.success,
    )


@_check("erasure-scaled-x-frame", "one erasure from the ℓ₁² FUNTF scaled by 2/3")
def _erasure_scaled(check_id: str, description: str) -> CheckResult:
    frame = frames.scaled(frames.counterexample_frames()["x"], 2 / 3)
    report = erasure.erasure_error(frame, 1)
    return _close(check_id, description, report.value, 2 / 3, 1e-9)


@_check("erasure-optimal-x-frame", "the scaled ℓ₁² FUNTF is one-erasure optimal")
def _erasure_optimal(check_id: str, description: str) -> CheckResult:
    frame = frames.scaled(frames.counterexample_frames()["x"], 2 / 3)
    result = erasure.is_erasure_optimal(frame)
    return CheckResult(
        check_id=check_id,
        description=description,
        observed={"optimal": result.optimal, "rescaled_is_funtf": result.rescaled_is_funtf},
        expected={"optimal": True, "rescaled_is_funtf": True},
        passed=result.optimal and result.rescaled_is_funtf,
    )


@_check("auerbach-funtf", "an Auerbach basis of the hexagonal norm is a FUNTF of length n")
def _auerbach(check_id: str, description: str) -> CheckResult:
    hexagon = SpaceSpec.polytope(
        [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [-1.0, -1.0]]
    )
    basis = frames.auerbach_basis(hexagon)
    classification = frames.classify(basis)
    return CheckResult(
        check_id=check_id,
        description=description,
        observed={"kind": classification.kind, "scale": classification.scale},
        expected={"kind": "funtf", "scale": 1.0},
        passed=classification.kind == "funtf"
        and abs((classification.scale or 0.0) - 1.0) <= 1e-8,
    )


@_check("auerbach-multiples", "two copies of a hexagonal Auerbach basis form a FUNTF")
def _auerbach_multiples(check_id: str, description: str) -> CheckResult:
    hexagon = SpaceSpec.polytope(
        [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [-1.0, -1.0]]
    )
    frame = construct.funtf_by_multiples(hexagon, 4)
    return _tight_check(check_id, description, frame, 1e-8)


def available_checks() -> dict[str, str]:
    return {check_id: description for check_id, (description, _) in _CHECKS.items()}


def run_reference_checks(check_ids: Iterable[str] | None = None) -> ReferenceReport:
    """Run the selected checks (all by default); failures are data, not errors."""
    selected = list(_CHECKS) if check_ids is None else list(check_ids)
    unknown = [check_id for check_id in selected if check_id not in _CHECKS]
    if unknown:
        raise InvalidInputError(
            f"unknown check ids: {', '.join(unknown)}", available=list(_CHECKS)
        )

    started = time.perf_counter()
    results: list[CheckResult] = []
    for check_id in selected:
        _, run = _CHECKS[check_id]
        result = run()
        level = logging.INFO if result.passed else logging.WARNING
        logger.log(level, f"{check_id}: {'pass' if result.passed else 'FAIL'}")
        results.append(result)

    report = ReferenceReport(checks=results, wall_time_seconds=time.perf_counter() - started)
    logger.info(
        f"Reference checks: {sum(r.passed for r in results)}/{len(results)} passed "
        f"in {report.wall_time_seconds:.1f}s"
    )
    return report

