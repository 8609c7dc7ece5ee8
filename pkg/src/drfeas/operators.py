"""Operator calculus built from set projections.

Operators are immutable expression trees evaluated on demand: identity,
projection, reflection (2P - Id), relaxation (1-lam)Id + lam*T, composition,
and the r-set Douglas-Rachford operator (Id + R_r ... R_1) / 2. No matrices
are materialized; every node applies cheap closed forms.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np

from .convex import ConvexSet
from .space import DimensionMismatch, Point


class Operator(ABC):
    """Immutable map of R^d to itself."""

    __slots__ = ("_dim",)

    def __init__(self, dim: int) -> None:
        self._dim = int(dim)

    @property
    def dim(self) -> int:
        return self._dim

    def apply(self, x: Point) -> Point:
        if x.dim != self._dim:
            raise DimensionMismatch(
                f"point has dimension {x.dim}, operator acts on dimension {self._dim}"
            )
        return Point(self._apply(x.coords))

    __call__ = apply

    @abstractmethod
    def _apply(self, x: np.ndarray) -> np.ndarray:
        """Evaluate on a raw coordinate array (no dimension check)."""


class Identity(Operator):
    __slots__ = ()

    def _apply(self, x: np.ndarray) -> np.ndarray:
        return x

    def __repr__(self) -> str:
        return "Identity()"


class Projection(Operator):
    """Metric projection onto a convex set; firmly nonexpansive."""

    __slots__ = ("set_",)

    def __init__(self, set_: ConvexSet) -> None:
        super().__init__(set_.dim)
        self.set_ = set_

    def _apply(self, x: np.ndarray) -> np.ndarray:
        return self.set_._project(x)

    def __repr__(self) -> str:
        return f"Projection({self.set_.kind})"


class Reflection(Operator):
    """2P - Id: the mirror image of x through its projection."""

    __slots__ = ("set_",)

    def __init__(self, set_: ConvexSet) -> None:
        super().__init__(set_.dim)
        self.set_ = set_

    def _apply(self, x: np.ndarray) -> np.ndarray:
        return 2.0 * self.set_._project(x) - x

    def __repr__(self) -> str:
        return f"Reflection({self.set_.kind})"


class Relaxation(Operator):
    """(1-lam) Id + lam T with lam in [0, 2]; lam=2 is the reflection of T."""

    __slots__ = ("inner_op", "lam")

    def __init__(self, inner_op: Operator, lam: float) -> None:
        lam = float(lam)
        if not (0.0 <= lam <= 2.0):
            raise ValueError(f"relaxation parameter must lie in [0, 2], got {lam}")
        super().__init__(inner_op.dim)
        self.inner_op = inner_op
        self.lam = lam

    def _apply(self, x: np.ndarray) -> np.ndarray:
        return (1.0 - self.lam) * x + self.lam * self.inner_op._apply(x)

    def __repr__(self) -> str:
        return f"Relaxation({self.inner_op!r}, lam={self.lam})"


class Composition(Operator):
    """Composition of factors, applied first-to-last in stored order."""

    __slots__ = ("factors",)

    def __init__(self, factors: Sequence[Operator]) -> None:
        factors = tuple(factors)
        if not factors:
            raise ValueError("composition needs at least one factor")
        dim = factors[0].dim
        for op in factors[1:]:
            if op.dim != dim:
                raise DimensionMismatch("composition factors must share a dimension")
        super().__init__(dim)
        self.factors = factors

    def _apply(self, x: np.ndarray) -> np.ndarray:
        for op in self.factors:
            x = op._apply(x)
        return x

    def __repr__(self) -> str:
        return f"Composition({list(self.factors)!r})"


class DrOperator(Operator):
    """r-set Douglas-Rachford operator over an ordered set list.

    Applies (x + R_r(...R_1(x))) / 2 where R_i reflects through sets[i-1];
    firmly nonexpansive, and fixes every common point of the sets.
    """

    __slots__ = ("sets",)

    def __init__(self, sets: Sequence[ConvexSet]) -> None:
        sets = tuple(sets)
        if not sets:
            raise ValueError("a DR operator needs at least one set")
        dim = sets[0].dim
        for c in sets[1:]:
            if c.dim != dim:
                raise DimensionMismatch("DR operator sets must share a dimension")
        super().__init__(dim)
        self.sets = sets

    def _apply(self, x: np.ndarray) -> np.ndarray:
        v = x
        for c in self.sets:
            v = 2.0 * c._project(v) - v
        return 0.5 * (x + v)

    def __repr__(self) -> str:
        return f"DrOperator({[c.kind for c in self.sets]})"


def relax(op: Operator, lam: float) -> Relaxation:
    """Relaxation of an operator; lam=0 acts as identity, lam=1 as op itself."""
    return Relaxation(op, lam)


def composite_reflection(sets: Sequence[ConvexSet]) -> Composition:
    """Reflections through the given sets composed in order (first set first)."""
    sets = tuple(sets)
    if not sets:
        raise ValueError("composite reflection needs at least one set")
    return Composition([Reflection(c) for c in sets])


def dr_operator(sets: Sequence[ConvexSet]) -> DrOperator:
    """Half-sum of the identity and the composite reflection over the sets."""
    return DrOperator(sets)
