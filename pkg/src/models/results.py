"""
Result types returned by the services and emitted by the CLI.
"""

from typing import Annotated, Any, Literal

import numpy as np
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    field_validator,
    model_serializer,
)

from .arrays import decode_array, encode_array
from .frame import FrameSystem
from .space import SpaceSpec

# Solver outcomes are often numpy booleans.
Flag = Annotated[bool, BeforeValidator(bool)]


class DualVertexSet(BaseModel):
    """Extreme points (or samples) of the dual unit ball."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: np.ndarray
    exhaustive: Flag

    @field_validator("vertices", mode="before")
    @classmethod
    def parse_vertices(cls, value: Any) -> np.ndarray:
        return decode_array(value, ndim=2)

    def __len__(self) -> int:
        return int(self.vertices.shape[0])

    @model_serializer
    def dump(self) -> dict[str, Any]:
        return {"vertices": encode_array(self.vertices), "exhaustive": self.exhaustive}


class AdmissibleSequence(BaseModel):
    """
    Vectors x₁..x_m with Σ|f(xᵢ)|² ≤ ‖f‖² for every functional f.

    exact records whether admissibility was verified over the whole dual
    ball (real polyhedral or Hilbert domain) or only over samples.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    space: SpaceSpec
    vectors: np.ndarray
    max_violation: float = 0.0
    exact: Flag = True

    @field_validator("vectors", mode="before")
    @classmethod
    def parse_vectors(cls, value: Any) -> np.ndarray:
        return decode_array(value, ndim=2)

    @property
    def length(self) -> int:
        return int(self.vectors.shape[0])

    @model_serializer
    def dump(self) -> list:
        return encode_array(self.vectors)


class PietschCertificate(BaseModel):
    """Probability weights on dual-ball points g₁..g_M."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vertices: np.ndarray
    weights: np.ndarray

    @field_validator("vertices", mode="before")
    @classmethod
    def parse_vertices(cls, value: Any) -> np.ndarray:
        return decode_array(value, ndim=2)

    @field_validator("weights", mode="before")
    @classmethod
    def parse_weights(cls, value: Any) -> np.ndarray:
        weights = decode_array(value, ndim=1, complex_field=False)
        if np.any(weights < 0):
            raise ValueError("Pietsch weights must be nonnegative")
        if abs(weights.sum() - 1.0) > 1e-9:
            raise ValueError(f"Pietsch weights sum to {weights.sum()}, not 1")
        return weights

    @model_serializer
    def dump(self) -> list[dict[str, Any]]:
        return [
            {"vertex": encode_array(v), "w": float(w)}
            for v, w in zip(self.vertices, self.weights, strict=True)
            if w > 0
        ]


class Pi2Result(BaseModel):
    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    witness: AdmissibleSequence
    certificate: PietschCertificate | None = None
    certified: Flag = False
    heuristic_upper: Flag = False
    lower_source: Literal["witness", "trace_duality", "frobenius"] = "witness"
    method: str = "cutting_plane"
    iterations: int = 0

    @property
    def gap(self) -> float:
        return self.upper - self.lower

    @model_serializer
    def dump(self) -> dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "certified": self.certified,
            "heuristic_upper": self.heuristic_upper,
            "lower_source": self.lower_source,
            "method": self.method,
            "iterations": self.iterations,
            "witness": self.witness.dump(),
            "witness_violation": self.witness.max_violation,
            "pietsch_weights": self.certificate.dump() if self.certificate else [],
        }


class FramePotential(BaseModel):
    """FP = π₂(S)² as an interval."""

    model_config = ConfigDict(frozen=True)

    lower: float
    upper: float
    certified: Flag
    length: int
    dim: int
    pi2: Pi2Result

    @property
    def tight_value(self) -> float:
        """N²/n, the minimum over normalized frames of this length."""
        return self.length**2 / self.dim

    @model_serializer
    def dump(self) -> dict[str, Any]:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "certified": self.certified,
            "length": self.length,
            "dim": self.dim,
            "tight_value": self.tight_value,
            "pi2": self.pi2.dump(),
        }


class Classification(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["funtf", "schauder", "approximate", "none"]
    scale: float | None = None
    normalized: Flag
    is_schauder: Flag
    is_approximate: Flag
    tight_scale: float | None = None
    identity_residual: float
    tight_residual: float
    sigma_min: float
    tol: float


class ErasureReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    m: int = Field(ge=1)
    value: float
    argmax_subset: list[int]
    heuristic: Flag = False
    per_subset: list[tuple[list[int], float]] | None = None

    @model_serializer
    def dump(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "m": self.m,
            "value": self.value,
            "argmax_subset": self.argmax_subset,
            "heuristic": self.heuristic,
        }
        if self.per_subset is not None:
            payload["per_subset"] = [
                {"subset": subset, "value": value} for subset, value in self.per_subset
            ]
        return payload


class ErasureOptimality(BaseModel):
    model_config = ConfigDict(frozen=True)

    optimal: Flag
    target: float
    products: list[float]
    diagonal: list[float]
    violations: list[int]
    rescaled_is_funtf: Flag


class OperatorNorm(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    value: float
    heuristic: Flag = False
    argmax: np.ndarray | None = None

    @model_serializer
    def dump(self) -> dict[str, Any]:
        return {
            "value": self.value,
            "heuristic": self.heuristic,
            "argmax": None if self.argmax is None else encode_array(self.argmax),
        }


class DiagonalTarget(BaseModel):
    """Diagonal operator Σ λⱼ eⱼ*⊗eⱼ to be written as rank-one projections."""

    model_config = ConfigDict(frozen=True)

    space: SpaceSpec
    lambdas: tuple[float, ...]

    @field_validator("lambdas")
    @classmethod
    def check_lambdas(cls, lambdas: tuple[float, ...]) -> tuple[float, ...]:
        if any(not np.isfinite(v) or v < 0 for v in lambdas):
            raise ValueError("lambdas must be finite and nonnegative")
        return lambdas

    @property
    def total(self) -> float:
        return float(sum(self.lambdas))


class LozFactorization(BaseModel):
    """αⱼβⱼ = tⱼ with ‖Σαⱼeⱼ‖ = ‖Σβⱼeⱼ*‖ = 1."""

    model_config = ConfigDict(frozen=True)

    alphas: tuple[float, ...]
    betas: tuple[float, ...]


class SearchReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    success: Flag
    residual: float
    length: int
    seed: int
    restarts: int
    iterations: int
    method: Literal["least_squares", "alternating_lp"]
    best: FrameSystem | None = None


class SmoothnessReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    space: SpaceSpec
    trials: int
    gaps: list[float]
    distances: list[float]
    min_gap: float
    all_positive: Flag


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    check_id: str
    description: str
    observed: Any
    expected: Any
    tolerance: float | None = None
    passed: Flag


class ReferenceReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    checks: list[CheckResult]
    wall_time_seconds: float

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failed(self) -> list[str]:
        return [check.check_id for check in self.checks if not check.passed]
