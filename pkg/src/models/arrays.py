"""
Array codec shared by the JSON-facing models.

Real scalars serialize as plain numbers and complex scalars as [re, im]
pairs. Floats go through Python's shortest round-trip repr, so a dump
followed by a load reproduces every double bit for bit.
"""

from typing import Any

import numpy as np

from ..core.errors import DimensionMismatchError, InvalidInputError


def decode_array(
    value: Any, ndim: int, complex_field: bool | None = None
) -> np.ndarray:
    """
    Parse nested lists (or an ndarray) into a read-only float/complex array.

    complex_field=None keeps whatever the input holds; True upcasts to
    complex; False rejects non-zero imaginary parts.
    """
    try:
        arr = np.array(value)
    except (TypeError, ValueError) as e:
        raise InvalidInputError(f"Malformed numeric array: {e}") from e

    if arr.dtype.kind not in "fciub":
        raise InvalidInputError(f"Malformed numeric array (dtype {arr.dtype})")

    if arr.dtype.kind != "c" and arr.ndim == ndim + 1 and arr.shape[-1] == 2:
        arr = arr[..., 0] + 1j * arr[..., 1]
    if arr.ndim != ndim:
        raise DimensionMismatchError(
            f"Expected a {ndim}-dimensional array, got shape {arr.shape}"
        )

    if complex_field:
        arr = arr.astype(complex)
    elif arr.dtype.kind == "c":
        if complex_field is False and np.any(arr.imag != 0):
            raise InvalidInputError("Complex entries supplied for a real space")
        arr = arr.astype(complex) if complex_field is None else arr.real.astype(float)
    else:
        arr = arr.astype(float)

    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("Array entries must be finite")
    arr.setflags(write=False)
    return arr


def encode_array(arr: np.ndarray) -> list:
    """Inverse of decode_array: nested lists, complex entries as [re, im]."""
    arr = np.asarray(arr)
    if arr.dtype.kind == "c":
        return np.stack([arr.real, arr.imag], axis=-1).tolist()
    return arr.astype(float).tolist()

