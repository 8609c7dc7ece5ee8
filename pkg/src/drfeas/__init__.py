"""Douglas-Rachford iterations for convex feasibility with flexible controls."""

from .control import (
    ControlMap,
    Cyclic,
    Explicit,
    InvalidControl,
    RandomBlock,
    cover_index,
    is_quasi_periodic,
    window,
    windows_quasi_periodic,
)
from .convex import (
    AffineSubspace,
    Ball,
    Box,
    ConvexSet,
    Halfspace,
    Hyperplane,
    InvalidSet,
    set_from_params,
)
from .diagnostics import (
    PropertyReport,
    asymptotic_regularity_series,
    check_firmly_nonexpansive,
    check_nonexpansive,
    check_quasi_nonexpansive,
    feasibility_report,
)
from .operators import (
    Composition,
    DrOperator,
    Identity,
    Operator,
    Projection,
    Reflection,
    Relaxation,
    composite_reflection,
    dr_operator,
    relax,
)
from .problem_io import (
    ParseError,
    RunConfig,
    build_operator,
    execute_config,
    format_reports,
    format_trace,
    load_document,
    parse_document,
    parse_problem,
    resolve_x0,
    serialize_problem,
    write_trace,
)
from .solver import (
    CONVERGED_DISPLACEMENT,
    FEASIBLE,
    MAX_ITERS,
    FeasibilityProblem,
    IterationTrace,
    StopRule,
    TraceStep,
    build_S,
    build_composite_Q,
    run_composite,
    run_unrestricted_dr,
    run_unrestricted_product,
)
from .space import DimensionMismatch, Point, combine, inner, norm

__all__ = [
    "AffineSubspace",
    "Ball",
    "Box",
    "CONVERGED_DISPLACEMENT",
    "Composition",
    "ControlMap",
    "ConvexSet",
    "Cyclic",
    "DimensionMismatch",
    "DrOperator",
    "Explicit",
    "FEASIBLE",
    "FeasibilityProblem",
    "Halfspace",
    "Hyperplane",
    "Identity",
    "InvalidControl",
    "InvalidSet",
    "IterationTrace",
    "MAX_ITERS",
    "Operator",
    "ParseError",
    "Point",
    "Projection",
    "PropertyReport",
    "RandomBlock",
    "Reflection",
    "Relaxation",
    "RunConfig",
    "StopRule",
    "TraceStep",
    "asymptotic_regularity_series",
    "build_S",
    "build_composite_Q",
    "build_operator",
    "check_firmly_nonexpansive",
    "check_nonexpansive",
    "check_quasi_nonexpansive",
    "combine",
    "composite_reflection",
    "cover_index",
    "dr_operator",
    "execute_config",
    "feasibility_report",
    "format_reports",
    "format_trace",
    "inner",
    "is_quasi_periodic",
    "load_document",
    "norm",
    "parse_document",
    "parse_problem",
    "relax",
    "resolve_x0",
    "run_composite",
    "run_unrestricted_dr",
    "run_unrestricted_product",
    "serialize_problem",
    "set_from_params",
    "window",
    "windows_quasi_periodic",
    "write_trace",
]
