"""
Frame systems and operator matrices.

Vectors and functionals are stored as N×n arrays (row j is xⱼ or fⱼ);
the JSON form is the list of pairs {"x": [...], "f": [...]}.
"""

from typing import Any

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    ValidationInfo,
    field_validator,
    model_serializer,
    model_validator,
)

from ..core.errors import DimensionMismatchError
from .arrays import decode_array, encode_array
from .space import SpaceSpec


def _is_complex(info: ValidationInfo) -> bool:
    space = info.data.get("space")
    return bool(space is not None and space.is_complex)


class FramePair(BaseModel):
    """A single pair (xⱼ, fⱼ)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x: np.ndarray
    f: np.ndarray

    @field_validator("x", "f", mode="before")
    @classmethod
    def parse_vector(cls, value: Any) -> np.ndarray:
        return decode_array(value, ndim=1)

    @model_serializer
    def dump(self) -> dict[str, Any]:
        return {"x": encode_array(self.x), "f": encode_array(self.f)}


class FrameSystem(BaseModel):
    """N pairs (xⱼ, fⱼ) over a SpaceSpec."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    space: SpaceSpec
    vectors: np.ndarray
    functionals: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def unpack_pairs(cls, data: Any) -> Any:
        if isinstance(data, dict) and "pairs" in data:
            data = dict(data)
            pairs = data.pop("pairs")
            if not isinstance(pairs, list | tuple) or not pairs:
                raise ValueError("pairs must be a non-empty list")
            vectors, functionals = [], []
            for pair in pairs:
                if isinstance(pair, FramePair):
                    vectors.append(pair.x)
                    functionals.append(pair.f)
                else:
                    vectors.append(pair["x"])
                    functionals.append(pair["f"])
            data["vectors"] = vectors
            data["functionals"] = functionals
        return data

    @field_validator("vectors", "functionals", mode="before")
    @classmethod
    def parse_rows(cls, value: Any, info: ValidationInfo) -> np.ndarray:
        if isinstance(value, list | tuple) and any(
            isinstance(v, np.ndarray) for v in value
        ):
            value = np.array([np.asarray(v) for v in value])
        return decode_array(value, ndim=2, complex_field=_is_complex(info))

    @model_validator(mode="after")
    def check_shapes(self) -> "FrameSystem":
        n = self.space.dim
        if self.vectors.shape != self.functionals.shape:
            raise DimensionMismatchError(
                f"{self.vectors.shape[0]} vectors but {self.functionals.shape[0]} functionals"
            )
        if self.vectors.shape[0] < 1:
            raise ValueError("a frame needs at least one pair")
        if self.vectors.shape[1] != n:
            raise DimensionMismatchError(
                f"pairs have length {self.vectors.shape[1]}, space has dimension {n}"
            )
        return self

    @property
    def length(self) -> int:
        return int(self.vectors.shape[0])

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def pairs(self) -> list[FramePair]:
        return [
            FramePair(x=x, f=f)
            for x, f in zip(self.vectors, self.functionals, strict=True)
        ]

    @model_serializer
    def dump(self) -> dict[str, Any]:
        return {
            "space": self.space.model_dump(mode="json"),
            "pairs": [pair.model_dump() for pair in self.pairs],
        }


class OperatorMatrix(BaseModel):
    """Matrix of a linear map in canonical coordinates (y = M x)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    space: SpaceSpec
    matrix: np.ndarray

    @field_validator("matrix", mode="before")
    @classmethod
    def parse_matrix(cls, value: Any, info: ValidationInfo) -> np.ndarray:
        return decode_array(value, ndim=2, complex_field=_is_complex(info))

    @model_validator(mode="after")
    def check_square(self) -> "OperatorMatrix":
        n = self.space.dim
        if self.matrix.shape != (n, n):
            raise DimensionMismatchError(
                f"operator has shape {self.matrix.shape}, expected ({n}, {n})"
            )
        return self

    @property
    def trace(self) -> complex | float:
        t = np.trace(self.matrix)
        return complex(t) if np.iscomplexobj(t) else float(t)

    @model_serializer
    def dump(self) -> dict[str, Any]:
        return {
            "space": self.space.model_dump(mode="json"),
            "matrix": encode_array(self.matrix),
        }
