"""Iteration schemes over families of convex sets.

Three schemes share one loop core:

* ``run_unrestricted_dr``: x_n = S_{n-1} x_{n-1}, where S_k is the r-set DR
  operator over the sets picked by the control window at step k.
* ``run_composite``: y_n = Q y_{n-1} for the fixed composite Q = S_{jf} ... S_0,
  with jf the control's cover index.
* ``run_unrestricted_product``: x_n = T_{h(n-1)} x_{n-1} for an explicit
  operator family and a control h over its indices.

Stopping: with displacement_tol > 0 a run stops once the step displacement
and the worst set distance are both within tolerance (status
``converged_displacement``); with displacement_tol == 0 feasibility alone
stops it (status ``feasible``); otherwise it runs to max_iters. A start
already feasible stops immediately with status ``feasible``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .control import ControlMap, InvalidControl, cover_index, window
from .convex import ConvexSet
from .operators import Composition, DrOperator, Operator, dr_operator
from .space import DimensionMismatch, Point, norm

CONVERGED_DISPLACEMENT = "converged_displacement"
FEASIBLE = "feasible"
MAX_ITERS = "max_iters"

# Declared interior points must clear every set boundary by this much.
INTERIOR_MARGIN = 1e-9


@dataclass(frozen=True)
class StopRule:
    """Finite-run stopping contract; max_iters always binds."""

    max_iters: int = 100_000
    displacement_tol: float = 1e-10
    feasibility_tol: float = 1e-8

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError("max_iters must be a positive integer")
        if self.displacement_tol < 0.0 or self.feasibility_tol < 0.0:
            raise ValueError("tolerances must be nonnegative")


@dataclass
class TraceStep:
    n: int
    iterate: Point
    displacement: float
    max_set_distance: float
    applied_operator_id: str
    certifier_residual: float | None = None


@dataclass
class IterationTrace:
    steps: list[TraceStep] = field(default_factory=list)
    terminal_status: str = MAX_ITERS

    @property
    def final(self) -> TraceStep:
        return self.steps[-1]

    @property
    def iterations(self) -> int:
        return len(self.steps) - 1


class FeasibilityProblem:
    """An ordered family of convex sets sharing one ambient dimension.

    A declared interior point is optional; when present it must sit strictly
    inside every set (margin >= 1e-9), which rules out declarations for
    empty-interior sets such as hyperplanes.
    """

    __slots__ = ("sets", "interior_point")

    def __init__(self, sets: Sequence[ConvexSet], interior_point: Point | None = None):
        sets = tuple(sets)
        if not sets:
            raise ValueError("a feasibility problem needs at least one set")
        dim = sets[0].dim
        for i, c in enumerate(sets):
            if c.dim != dim:
                raise DimensionMismatch(
                    f"set {i + 1} has dimension {c.dim}, expected {dim}"
                )
        if interior_point is not None:
            if interior_point.dim != dim:
                raise DimensionMismatch(
                    f"interior point has dimension {interior_point.dim}, expected {dim}"
                )
            for i, c in enumerate(sets):
                margin = c.interior_margin(interior_point)
                if not (margin >= INTERIOR_MARGIN):
                    raise ValueError(
                        f"declared interior point is not strictly inside set "
                        f"{i + 1} ({c.kind}): margin {margin:.3e}"
                    )
        self.sets = sets
        self.interior_point = interior_point

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def dim(self) -> int:
        return self.sets[0].dim

    def distances(self, x: Point) -> list[float]:
        return [c.distance(x) for c in self.sets]

    def max_distance(self, x: Point) -> float:
        return max(self.distances(x))

    def sampling_scale(self) -> float:
        """Default hypercube half-width for sampled diagnostics."""
        return 4.0 * max(1.0, max(c.scale_hint() for c in self.sets))


def build_S(problem: FeasibilityProblem, f: ControlMap, r: int, n: int) -> DrOperator:
    """The r-set DR operator over the sets selected by the window at step n."""
    idx = window(f, r, n)
    if max(idx) > problem.m:
        raise InvalidControl(
            f"control produced set index {max(idx)} but the problem has "
            f"{problem.m} sets"
        )
    return dr_operator([problem.sets[i - 1] for i in idx])


def build_composite_Q(problem: FeasibilityProblem, f: ControlMap, r: int) -> Composition:
    """Composition S_0, ..., S_jf (applied in that order), jf = cover_index(f)."""
    jf = cover_index(f)
    cache: dict[tuple[int, ...], DrOperator] = {}
    factors = []
    for n in range(jf + 1):
        key = tuple(window(f, r, n))
        op = cache.get(key)
        if op is None:
            op = build_S(problem, f, r, n)
            cache[key] = op
        factors.append(op)
    return Composition(factors)


def _require_range(f: ControlMap, size: int, what: str) -> None:
    if f.m != size:
        raise InvalidControl(
            f"control range is 1..{f.m} but there are {size} {what}"
        )


def _certifier_residual(certifier: Operator | None, x: Point) -> float | None:
    if certifier is None:
        return None
    return norm(certifier.apply(x) - x)


def _iterate(
    next_op: Callable[[int], tuple[Operator, str]],
    x0: Point,
    stop: StopRule,
    problem: FeasibilityProblem | None,
    certifier: Operator | None,
) -> IterationTrace:
    """Shared loop: next_op(n) yields the operator producing x_n (n >= 1)."""
    x = x0
    dist = problem.max_distance(x) if problem is not None else 0.0
    steps = [TraceStep(0, x, 0.0, dist, "init", _certifier_residual(certifier, x))]
    if problem is not None and dist <= stop.feasibility_tol:
        return IterationTrace(steps, FEASIBLE)

    status = MAX_ITERS
    for n in range(1, stop.max_iters + 1):
        op, op_id = next_op(n)
        x_next = op.apply(x)
        disp = norm(x_next - x)
        dist = problem.max_distance(x_next) if problem is not None else 0.0
        steps.append(
            TraceStep(n, x_next, disp, dist, op_id, _certifier_residual(certifier, x_next))
        )
        x = x_next
        feasible_now = problem is not None and dist <= stop.feasibility_tol
        if stop.displacement_tol > 0.0:
            within_feas = feasible_now or problem is None
            if disp <= stop.displacement_tol and within_feas:
                status = CONVERGED_DISPLACEMENT
                break
        elif feasible_now:
            status = FEASIBLE
            break
    return IterationTrace(steps, status)


def run_unrestricted_dr(
    problem: FeasibilityProblem,
    f: ControlMap,
    r: int,
    x0: Point,
    stop: StopRule = StopRule(),
    certifier: Operator | None = None,
) -> IterationTrace:
    """Per-step DR scheme: x_n = S_{n-1} x_{n-1} over control windows.

    Distinct windows are memoized by index tuple, so quasi-periodic controls
    reuse a finite pool of operators while genuinely aperiodic ones still run.
    """
    if x0.dim != problem.dim:
        raise DimensionMismatch(
            f"start has dimension {x0.dim}, problem lives in dimension {problem.dim}"
        )
    _require_range(f, problem.m, "sets")
    cache: dict[tuple[int, ...], DrOperator] = {}

    def next_op(n: int) -> tuple[Operator, str]:
        k = n - 1
        key = tuple(window(f, r, k))
        op = cache.get(key)
        if op is None:
            op = dr_operator([problem.sets[i - 1] for i in key])
            cache[key] = op
        return op, f"S{k}"

    return _iterate(next_op, x0, stop, problem, certifier)


def run_composite(
    problem: FeasibilityProblem,
    f: ControlMap,
    r: int,
    y0: Point,
    stop: StopRule = StopRule(),
    certifier: Operator | None = None,
) -> IterationTrace:
    """Fixed-operator scheme: y_n = Q y_{n-1} with Q = S_jf ... S_0."""
    if y0.dim != problem.dim:
        raise DimensionMismatch(
            f"start has dimension {y0.dim}, problem lives in dimension {problem.dim}"
        )
    _require_range(f, problem.m, "sets")
    Q = build_composite_Q(problem, f, r)
    return _iterate(lambda n: (Q, "Q"), y0, stop, problem, certifier)


def run_unrestricted_product(
    operators: Sequence[Operator],
    h: ControlMap,
    x0: Point,
    stop: StopRule = StopRule(),
    problem: FeasibilityProblem | None = None,
    certifier: Operator | None = None,
) -> IterationTrace:
    """Controlled product: x_n = T_{h(n-1)} x_{n-1} over an operator family.

    When a problem is supplied its sets define the feasibility residual in
    the trace and the feasibility half of the stopping rule; without one the
    rule reduces to displacement only (k = 1 gives plain Picard iteration).
    """
    operators = tuple(operators)
    if not operators:
        raise ValueError("operator family must be nonempty")
    dim = operators[0].dim
    for i, op in enumerate(operators):
        if op.dim != dim:
            raise DimensionMismatch(f"operator {i + 1} acts on dimension {op.dim}, expected {dim}")
    if x0.dim != dim:
        raise DimensionMismatch(f"start has dimension {x0.dim}, operators act on {dim}")
    if problem is not None and problem.dim != dim:
        raise DimensionMismatch("problem and operators live in different dimensions")
    _require_range(h, len(operators), "operators")

    def next_op(n: int) -> tuple[Operator, str]:
        j = h.index_at(n - 1)
        return operators[j - 1], f"T{j}"

    return _iterate(next_op, x0, stop, problem, certifier)
