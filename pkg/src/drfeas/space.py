"""Dense real-vector substrate: immutable points of R^d and exact linear ops."""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np


class DimensionMismatch(ValueError):
    """Raised when two objects that must share a dimension do not."""


class Point:
    """An immutable point of R^d with finite coordinates, d >= 1."""

    __slots__ = ("_coords",)

    def __init__(self, coords) -> None:
        arr = np.array(coords, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coords must be a nonempty 1-d sequence of reals")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coordinates must be finite (no NaN/Inf)")
        arr.setflags(write=False)
        self._coords = arr

    @property
    def coords(self) -> np.ndarray:
        """Read-only coordinate array."""
        return self._coords

    @property
    def dim(self) -> int:
        return self._coords.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __iter__(self) -> Iterator[float]:
        return iter(self._coords.tolist())

    def __getitem__(self, i: int) -> float:
        return float(self._coords[i])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Point):
            return NotImplemented
        return np.array_equal(self._coords, other._coords)

    __hash__ = None  # mutable-looking value type; identity hashing would mislead

    def __add__(self, other: "Point") -> "Point":
        return combine(1.0, self, 1.0, other)

    def __sub__(self, other: "Point") -> "Point":
        return combine(1.0, self, -1.0, other)

    def __rmul__(self, a: float) -> "Point":
        return Point(float(a) * self._coords)

    def __repr__(self) -> str:
        return f"Point({self._coords.tolist()!r})"


def _require_same_dim(x: Point, y: Point) -> None:
    if x.dim != y.dim:
        raise DimensionMismatch(f"points have dimensions {x.dim} and {y.dim}")


def inner(x: Point, y: Point) -> float:
    """Euclidean inner product of two points of equal dimension."""
    _require_same_dim(x, y)
    return float(np.dot(x.coords, y.coords))


def norm(x: Point) -> float:
    """Norm induced by the inner product, computed as sqrt(inner(x, x))."""
    return math.sqrt(inner(x, x))


def combine(a: float, x: Point, b: float, y: Point) -> Point:
    """Linear combination a*x + b*y, coordinatewise."""
    _require_same_dim(x, y)
    return Point(float(a) * x.coords + float(b) * y.coords)
