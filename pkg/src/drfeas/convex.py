"""Closed convex sets with exact closed-form metric projections.

Five kinds are supported: Halfspace, Hyperplane, Ball, Box and
AffineSubspace. Each knows how to project a point onto itself, measure
distance, test membership to a tolerance, and report how deep a point sits
in its interior (used to validate declared interior points).
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

import numpy as np

from .space import DimensionMismatch, Point

# Normals shorter than this make the projection formula numerically void.
DEGENERATE_NORMAL = 1e-12
# Largest admissible least-squares residual for an affine system A x = b.
AFFINE_CONSISTENCY_TOL = 1e-9


class InvalidSet(ValueError):
    """Set parameters violate a construction invariant."""


def _as_vector(v, name: str) -> np.ndarray:
    if isinstance(v, Point):
        arr = np.array(v.coords, dtype=float)
    else:
        arr = np.array(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidSet(f"{name} must be a nonempty vector")
    if not np.all(np.isfinite(arr)):
        raise InvalidSet(f"{name} must be finite")
    arr.setflags(write=False)
    return arr


class ConvexSet(ABC):
    """A nonempty closed convex subset of R^d with a closed-form projection."""

    __slots__ = ("_dim",)

    kind: str = "abstract"

    def __init__(self, dim: int) -> None:
        if int(dim) < 1:
            raise InvalidSet("dimension must be a positive integer")
        self._dim = int(dim)

    @property
    def dim(self) -> int:
        return self._dim

    def _require_dim(self, x: Point) -> None:
        if x.dim != self._dim:
            raise DimensionMismatch(
                f"point has dimension {x.dim}, set lives in dimension {self._dim}"
            )

    def project(self, x: Point) -> Point:
        """Nearest point of the set to x."""
        self._require_dim(x)
        return Point(self._project(x.coords))

    def distance(self, x: Point) -> float:
        """Euclidean distance from x to the set."""
        self._require_dim(x)
        return float(np.linalg.norm(x.coords - self._project(x.coords)))

    def contains(self, x: Point, tol: float = 0.0) -> bool:
        """Distance-based membership: true iff distance(x) <= tol."""
        if tol < 0.0:
            raise ValueError("tol must be nonnegative")
        return self.distance(x) <= tol

    @abstractmethod
    def _project(self, x: np.ndarray) -> np.ndarray:
        """Projection on raw coordinate arrays (no dimension check)."""

    @abstractmethod
    def interior_margin(self, x: Point) -> float:
        """Radius of the largest ball around x inside the set.

        Negative when x is outside or on the boundary; -inf for sets with
        empty interior (hyperplanes, proper affine subspaces).
        """

    @abstractmethod
    def scale_hint(self) -> float:
        """Magnitude of the set's defining data, for choosing sampling boxes."""

    @abstractmethod
    def params(self) -> dict:
        """JSON-serializable parameters, keyed as in problem documents."""


class Halfspace(ConvexSet):
    """{x : <a, x> <= b} with a nonzero normal a."""

    __slots__ = ("a", "b", "_a_norm_sq", "_a_norm")

    kind = "Halfspace"

    def __init__(self, a, b: float) -> None:
        a = _as_vector(a, "a")
        super().__init__(a.shape[0])
        nrm = float(np.linalg.norm(a))
        if nrm <= DEGENERATE_NORMAL:
            raise InvalidSet("degenerate normal: ||a|| is numerically zero")
        self.a = a
        self.b = float(b)
        self._a_norm = nrm
        self._a_norm_sq = nrm * nrm

    def _project(self, x: np.ndarray) -> np.ndarray:
        g = float(np.dot(self.a, x)) - self.b
        if g <= 0.0:
            return x
        return x - (g / self._a_norm_sq) * self.a

    def interior_margin(self, x: Point) -> float:
        self._require_dim(x)
        return (self.b - float(np.dot(self.a, x.coords))) / self._a_norm

    def scale_hint(self) -> float:
        return abs(self.b) / self._a_norm

    def params(self) -> dict:
        return {"kind": self.kind, "a": self.a.tolist(), "b": self.b}


class Hyperplane(ConvexSet):
    """{x : <a, x> = b} with a nonzero normal a."""

    __slots__ = ("a", "b", "_a_norm_sq", "_a_norm")

    kind = "Hyperplane"

    def __init__(self, a, b: float) -> None:
        a = _as_vector(a, "a")
        super().__init__(a.shape[0])
        nrm = float(np.linalg.norm(a))
        if nrm <= DEGENERATE_NORMAL:
            raise InvalidSet("degenerate normal: ||a|| is numerically zero")
        self.a = a
        self.b = float(b)
        self._a_norm = nrm
        self._a_norm_sq = nrm * nrm

    def _project(self, x: np.ndarray) -> np.ndarray:
        g = float(np.dot(self.a, x)) - self.b
        return x - (g / self._a_norm_sq) * self.a

    def interior_margin(self, x: Point) -> float:
        self._require_dim(x)
        return -math.inf

    def scale_hint(self) -> float:
        return abs(self.b) / self._a_norm

    def params(self) -> dict:
        return {"kind": self.kind, "a": self.a.tolist(), "b": self.b}


class Ball(ConvexSet):
    """Closed Euclidean ball of positive radius."""

    __slots__ = ("center", "radius")

    kind = "Ball"

    def __init__(self, center, radius: float) -> None:
        center = _as_vector(center, "center")
        super().__init__(center.shape[0])
        if not (float(radius) > 0.0):
            raise InvalidSet("radius must be positive")
        self.center = center
        self.radius = float(radius)

    def _project(self, x: np.ndarray) -> np.ndarray:
        d = float(np.linalg.norm(x - self.center))
        if d <= self.radius:
            return x
        return self.center + (self.radius / d) * (x - self.center)

    def interior_margin(self, x: Point) -> float:
        self._require_dim(x)
        return self.radius - float(np.linalg.norm(x.coords - self.center))

    def scale_hint(self) -> float:
        return float(np.linalg.norm(self.center)) + self.radius

    def params(self) -> dict:
        return {"kind": self.kind, "center": self.center.tolist(), "radius": self.radius}


class Box(ConvexSet):
    """Axis-aligned box {x : lo <= x <= hi} componentwise."""

    __slots__ = ("lo", "hi")

    kind = "Box"

    def __init__(self, lo, hi) -> None:
        lo = _as_vector(lo, "lo")
        hi = _as_vector(hi, "hi")
        if lo.shape != hi.shape:
            raise InvalidSet("lo and hi must have the same dimension")
        if np.any(lo > hi):
            raise InvalidSet("box bounds must satisfy lo <= hi componentwise")
        super().__init__(lo.shape[0])
        self.lo = lo
        self.hi = hi

    def _project(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lo, self.hi)

    def interior_margin(self, x: Point) -> float:
        self._require_dim(x)
        return float(min(np.min(x.coords - self.lo), np.min(self.hi - x.coords)))

    def scale_hint(self) -> float:
        return float(max(np.max(np.abs(self.lo)), np.max(np.abs(self.hi))))

    def params(self) -> dict:
        return {"kind": self.kind, "lo": self.lo.tolist(), "hi": self.hi.tolist()}


class AffineSubspace(ConvexSet):
    """Solution set {x : A x = b} of a consistent linear system.

    The pseudoinverse of A is computed once at construction; projections then
    cost one matrix-vector product each. Inconsistent systems are rejected
    here so projection never sees them.
    """

    __slots__ = ("A", "b", "_pinv", "_rank")

    kind = "AffineSubspace"

    def __init__(self, A, b) -> None:
        A = np.array(A, dtype=float)
        if A.ndim != 2 or A.size == 0:
            raise InvalidSet("A must be a nonempty matrix")
        if not np.all(np.isfinite(A)):
            raise InvalidSet("A must be finite")
        b = _as_vector(b, "b")
        if b.shape[0] != A.shape[0]:
            raise InvalidSet(
                f"b has {b.shape[0]} entries but A has {A.shape[0]} rows"
            )
        super().__init__(A.shape[1])
        A.setflags(write=False)
        self.A = A
        self.b = b
        self._pinv = np.linalg.pinv(A)
        self._rank = int(np.linalg.matrix_rank(A))
        residual = float(np.linalg.norm(A @ (self._pinv @ b) - b))
        if residual > AFFINE_CONSISTENCY_TOL:
            raise InvalidSet(
                f"inconsistent affine system: least-squares residual {residual:.3e}"
            )

    def _project(self, x: np.ndarray) -> np.ndarray:
        return x - self._pinv @ (self.A @ x - self.b)

    def interior_margin(self, x: Point) -> float:
        self._require_dim(x)
        if self._rank == 0:
            return math.inf  # zero system: the set is the whole space
        return -math.inf

    def scale_hint(self) -> float:
        return float(np.linalg.norm(self._pinv @ self.b))

    def params(self) -> dict:
        return {"kind": self.kind, "A": self.A.tolist(), "b": self.b.tolist()}


SET_KINDS: dict[str, type[ConvexSet]] = {
    cls.kind: cls for cls in (Halfspace, Hyperplane, Ball, Box, AffineSubspace)
}


def set_from_params(params: dict) -> ConvexSet:
    """Construct a set from its parameter dict (inverse of ConvexSet.params)."""
    fields = dict(params)
    kind = fields.pop("kind", None)
    cls = SET_KINDS.get(kind)
    if cls is None:
        raise InvalidSet(f"unknown set kind {kind!r}")
    try:
        return cls(**fields)
    except TypeError as exc:
        raise InvalidSet(f"bad parameters for {kind}: {exc}") from exc
