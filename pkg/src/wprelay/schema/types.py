"""Annotated numpy types shared by the pydantic schemas."""

from __future__ import annotations

from typing import Annotated, Any

import numpy as np
import numpy.typing as npt

from pydantic import BeforeValidator, PlainSerializer

ComplexArray = npt.NDArray[np.complex128]


def as_complex_vector(value: Any) -> ComplexArray:
    """Coerce ``value`` to a read-only, finite, 1-D complex128 array.

    Raises
    ------
    ValueError
        If the input is not one-dimensional, is empty or holds non-finite
        entries.
    """
    try:
        arr = np.array(value, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ValueError(f'not a complex vector: {exc}') from exc
    if arr.ndim != 1:
        raise ValueError(f'expected a 1-D vector, got shape {arr.shape}')
    if arr.size == 0:
        raise ValueError('vector must have at least one entry')
    if not np.all(np.isfinite(arr)):
        raise ValueError('vector entries must be finite')
    arr.flags.writeable = False
    return arr


def dump_complex_vector(value: ComplexArray) -> list[list[float]]:
    """Serialize a complex vector as ``[[re, im], ...]``."""
    return [[float(z.real), float(z.imag)] for z in value]


def _load_complex_vector(value: Any) -> ComplexArray:
    # accepts the ``[[re, im], ...]`` layout produced by the serializer
    if isinstance(value, (list, tuple)) and all(
        isinstance(item, (list, tuple)) and len(item) == 2 for item in value
    ):
        value = [complex(re, im) for re, im in value]
    return as_complex_vector(value)


ComplexVector = Annotated[
    np.ndarray,
    BeforeValidator(_load_complex_vector),
    PlainSerializer(
        dump_complex_vector,
        return_type=list[list[float]],
        when_used='json',
    ),
]

__all__ = [
    'ComplexArray',
    'ComplexVector',
    'as_complex_vector',
    'dump_complex_vector',
]
