"""
Finite-dimensional normed spaces in coordinates.

A SpaceSpec is an immutable, hashable value: the dimension, the scalar
field and one of three norm families. Norm arithmetic lives in
src.services.spaces; this module only validates and serializes.
"""

import math
from enum import StrEnum
from typing import Annotated, Any, Literal

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_serializer,
    field_validator,
    model_validator,
)


class ScalarField(StrEnum):
    REAL = "real"
    COMPLEX = "complex"


def _parse_exponent(value: Any) -> float:
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "+inf"):
            return math.inf
        value = float(value)
    p = float(value)
    if math.isnan(p) or p < 1:
        raise ValueError(f"norm exponent must satisfy p >= 1, got {value!r}")
    return p


def _encode_exponent(p: float) -> float | str:
    return "inf" if math.isinf(p) else p


class LpNorm(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["lp"] = "lp"
    p: float

    @field_validator("p", mode="before")
    @classmethod
    def parse_p(cls, value: Any) -> float:
        return _parse_exponent(value)

    @field_serializer("p")
    def dump_p(self, p: float) -> float | str:
        return _encode_exponent(p)


class WeightedLpNorm(BaseModel):
    """‖x‖ = (Σ wₖ|xₖ|ᵖ)^{1/p}; for p = ∞, max wₖ|xₖ|."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["weighted_lp"] = "weighted_lp"
    p: float
    weights: tuple[float, ...]

    @field_validator("p", mode="before")
    @classmethod
    def parse_p(cls, value: Any) -> float:
        return _parse_exponent(value)

    @field_validator("weights")
    @classmethod
    def check_weights(cls, weights: tuple[float, ...]) -> tuple[float, ...]:
        if not all(math.isfinite(w) and w > 0 for w in weights):
            raise ValueError("weights must be finite and strictly positive")
        return weights

    @field_serializer("p")
    def dump_p(self, p: float) -> float | str:
        return _encode_exponent(p)


class PolytopeNorm(BaseModel):
    """‖x‖ = max over the stored dual vertices v of |⟨v, x⟩|."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["polytope"] = "polytope"
    dual_vertices: tuple[tuple[float, ...], ...]


NormSpec = Annotated[LpNorm | WeightedLpNorm | PolytopeNorm, Field(discriminator="kind")]


class SpaceSpec(BaseModel):
    """
    A finite-dimensional normed space over the reals or the complexes.
    """

    model_config = ConfigDict(frozen=True)

    dim: int = Field(gt=0)
    field: ScalarField = ScalarField.REAL
    norm: NormSpec

    @model_validator(mode="after")
    def check_norm(self) -> "SpaceSpec":
        norm = self.norm
        if isinstance(norm, WeightedLpNorm) and len(norm.weights) != self.dim:
            raise ValueError(
                f"weights has length {len(norm.weights)}, expected {self.dim}"
            )
        if isinstance(norm, PolytopeNorm):
            if self.field is ScalarField.COMPLEX:
                raise ValueError("polytope norms are only supported over the reals")
            vertices = np.array(norm.dual_vertices, dtype=float)
            if vertices.ndim != 2 or vertices.shape[1] != self.dim:
                raise ValueError(
                    f"dual_vertices must be a list of length-{self.dim} vectors"
                )
            if not np.all(np.isfinite(vertices)):
                raise ValueError("dual_vertices must be finite")
            for v in vertices:
                if not np.any(np.all(np.abs(vertices + v) <= 1e-12, axis=1)):
                    raise ValueError("dual_vertices must be symmetric (v and -v)")
            if np.linalg.matrix_rank(vertices) < self.dim:
                raise ValueError("dual_vertices must span the whole space")
        return self

    # Constructors

    @classmethod
    def lp(cls, dim: int, p: float | str, field: str = "real") -> "SpaceSpec":
        return cls(dim=dim, field=field, norm=LpNorm(p=p))

    @classmethod
    def weighted_lp(
        cls, p: float | str, weights: list[float], field: str = "real"
    ) -> "SpaceSpec":
        return cls(
            dim=len(weights),
            field=field,
            norm=WeightedLpNorm(p=p, weights=tuple(weights)),
        )

    @classmethod
    def polytope(cls, dual_vertices: list[list[float]]) -> "SpaceSpec":
        vertices = tuple(tuple(float(c) for c in v) for v in dual_vertices)
        return cls(dim=len(vertices[0]), norm=PolytopeNorm(dual_vertices=vertices))

    # Classification helpers

    @property
    def is_complex(self) -> bool:
        return self.field is ScalarField.COMPLEX

    @property
    def dtype(self) -> type:
        return complex if self.is_complex else float

    @property
    def is_lp_family(self) -> bool:
        """True for ℓp and weighted ℓp (1-unconditional canonical basis)."""
        return isinstance(self.norm, LpNorm | WeightedLpNorm)

    @property
    def p(self) -> float | None:
        return self.norm.p if self.is_lp_family else None

    @property
    def scales(self) -> np.ndarray:
        """Diagonal s with ‖x‖ = ‖s∘x‖_p for the ℓp family."""
        if isinstance(self.norm, WeightedLpNorm):
            w = np.array(self.norm.weights, dtype=float)
            p = self.norm.p
            return w if math.isinf(p) else w ** (1.0 / p)
        return np.ones(self.dim)

    @property
    def is_hilbert(self) -> bool:
        return self.is_lp_family and self.p == 2

    @property
    def is_polyhedral(self) -> bool:
        """Real spaces whose unit ball is a polytope."""
        if self.is_complex:
            return False
        if isinstance(self.norm, PolytopeNorm):
            return True
        return self.p in (1.0, math.inf)

    @property
    def is_smooth(self) -> bool:
        return self.is_lp_family and 1 < self.p < math.inf

    def label(self) -> str:
        field = "complex" if self.is_complex else "real"
        if isinstance(self.norm, PolytopeNorm):
            return f"{field} polytope^{self.dim} ({len(self.norm.dual_vertices)} dual vertices)"
        p = "inf" if math.isinf(self.p) else f"{self.p:g}"
        prefix = "weighted l" if isinstance(self.norm, WeightedLpNorm) else "l"
        return f"{field} {prefix}{p}^{self.dim}"
