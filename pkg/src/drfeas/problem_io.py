"""Problem documents, run configurations, and trace/report tables.

A problem document is a single JSON object. Keys ``dimension`` and ``sets``
are required; the rest configure a run:

    {
      "dimension": 2,
      "sets": [
        {"kind": "Ball", "center": [0.0, 0.0], "radius": 1.0},
        {"kind": "Halfspace", "a": [1.0, 0.0], "b": 2.0}
      ],
      "interior_point": [0.0, 0.0],
      "scheme": "composite_q",
      "control": {"rule": "cyclic", "m": 2},
      "r": 2,
      "x0": [5.0, 5.0],
      "stop": {"max_iters": 10000, "displacement_tol": 1e-10,
               "feasibility_tol": 1e-8},
      "trace_path": "run.trace.csv"
    }

Schemes: ``unrestricted_dr`` and ``composite_q`` need ``control`` (over the
set indices) and ``r`` > 1. Scheme ``product`` additionally needs an
``operators`` list and uses ``control`` over the operator indices; operator
specs that derive from control windows (``s_window``, ``composite_q``) read
``window_control`` and ``r``. ``x0`` is a coordinate list, ``"origin"``, or
``"random(seed, scale)"``. An optional ``certifier`` operator spec adds a
residual column to the trace.

Control rules: ``{"rule": "cyclic", "m": ...}``, ``{"rule": "explicit",
"prefix": [...]}``, ``{"rule": "random_block", "m": ..., "M": ...,
"seed": ...}``.

Traces and property reports serialize to comma-separated tables with a
one-line header; floats are written in full round-trip precision, so a
fixed seed reproduces files byte for byte.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import numpy as np

from .control import ControlMap, Cyclic, Explicit, RandomBlock
from .convex import ConvexSet, InvalidSet, set_from_params
from .diagnostics import PropertyReport
from .operators import Operator, Projection, dr_operator, relax
from .solver import FeasibilityProblem, IterationTrace, StopRule, build_S

SCHEMES = ("unrestricted_dr", "composite_q", "product")

_RANDOM_X0 = re.compile(r"^random\(\s*(\d+)\s*,\s*([0-9.eE+-]+)\s*\)$")


class ParseError(ValueError):
    """Malformed problem document; the message carries the offending location."""


@dataclass
class RunConfig:
    scheme: str
    control: ControlMap
    r: int | None = None
    x0: object = "origin"
    stop: StopRule = field(default_factory=StopRule)
    trace_path: str | None = None
    operator_specs: list[dict] | None = None
    window_control: ControlMap | None = None
    certifier_spec: dict | None = None


def _require(doc: dict, key: str) -> object:
    if key not in doc:
        raise ParseError(f"missing required key {key!r}")
    return doc[key]


def _parse_sets(doc: dict) -> list[ConvexSet]:
    dimension = _require(doc, "dimension")
    if not isinstance(dimension, int) or dimension < 1:
        raise ParseError("dimension must be a positive integer")
    raw_sets = _require(doc, "sets")
    if not isinstance(raw_sets, list) or not raw_sets:
        raise ParseError("sets must be a nonempty list")
    sets = []
    for i, params in enumerate(raw_sets):
        if not isinstance(params, dict):
            raise ParseError(f"sets[{i}]: expected an object")
        try:
            c = set_from_params(params)
        except (InvalidSet, ValueError) as exc:
            raise ParseError(f"sets[{i}]: {exc}") from exc
        if c.dim != dimension:
            raise ParseError(
                f"sets[{i}]: set has dimension {c.dim}, document declares {dimension}"
            )
        sets.append(c)
    return sets


def parse_problem(text: str) -> FeasibilityProblem:
    """Parse the problem part (dimension, sets, interior_point) of a document."""
    problem, _ = parse_document(text)
    return problem


def parse_document(text: str) -> tuple[FeasibilityProblem, RunConfig | None]:
    """Parse a full document; the config is None when no scheme is given."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")

    from .space import Point  # local import keeps module import order simple

    sets = _parse_sets(doc)
    interior = None
    if doc.get("interior_point") is not None:
        try:
            interior = Point(doc["interior_point"])
        except ValueError as exc:
            raise ParseError(f"interior_point: {exc}") from exc
    try:
        problem = FeasibilityProblem(sets, interior)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc

    if "scheme" not in doc:
        return problem, None
    return problem, _parse_config(doc, problem)


def _parse_control(raw: object, where: str) -> ControlMap:
    if not isinstance(raw, dict):
        raise ParseError(f"{where}: expected an object with a 'rule' key")
    rule = raw.get("rule")
    try:
        if rule == "cyclic":
            return Cyclic(raw["m"])
        if rule == "explicit":
            return Explicit(raw["prefix"])
        if rule == "random_block":
            return RandomBlock(raw["m"], raw["M"], raw["seed"])
    except KeyError as exc:
        raise ParseError(f"{where}: missing field {exc} for rule {rule!r}") from exc
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    raise ParseError(f"{where}: unknown rule {rule!r}")


def _parse_stop(raw: object) -> StopRule:
    if raw is None:
        return StopRule()
    if not isinstance(raw, dict):
        raise ParseError("stop: expected an object")
    known = {"max_iters", "displacement_tol", "feasibility_tol"}
    extra = set(raw) - known
    if extra:
        raise ParseError(f"stop: unknown fields {sorted(extra)}")
    try:
        return StopRule(**raw)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"stop: {exc}") from exc


def _parse_config(doc: dict, problem: FeasibilityProblem) -> RunConfig:
    scheme = doc["scheme"]
    if scheme not in SCHEMES:
        raise ParseError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    control = _parse_control(_require(doc, "control"), "control")
    r = doc.get("r")
    window_control = None
    if doc.get("window_control") is not None:
        window_control = _parse_control(doc["window_control"], "window_control")

    if scheme in ("unrestricted_dr", "composite_q"):
        if not isinstance(r, int) or r <= 1:
            raise ParseError(f"scheme {scheme!r} needs an integer r > 1")
        if control.m != problem.m:
            raise ParseError(
                f"control range 1..{control.m} does not match the {problem.m} sets"
            )

    operator_specs = None
    if scheme == "product":
        raw_ops = _require(doc, "operators")
        if not isinstance(raw_ops, list) or not raw_ops:
            raise ParseError("operators must be a nonempty list")
        operator_specs = []
        for i, spec in enumerate(raw_ops):
            _validate_operator_spec(spec, problem, r, window_control, f"operators[{i}]")
            operator_specs.append(spec)
        if control.m != len(operator_specs):
            raise ParseError(
                f"control range 1..{control.m} does not match the "
                f"{len(operator_specs)} operators"
            )

    certifier_spec = doc.get("certifier")
    if certifier_spec is not None:
        _validate_operator_spec(certifier_spec, problem, r, window_control, "certifier")

    x0 = doc.get("x0", "origin")
    _resolve_x0(x0, problem.dim)  # validate now, resolve again at run time

    return RunConfig(
        scheme=scheme,
        control=control,
        r=r,
        x0=x0,
        stop=_parse_stop(doc.get("stop")),
        trace_path=doc.get("trace_path"),
        operator_specs=operator_specs,
        window_control=window_control,
        certifier_spec=certifier_spec,
    )


def _validate_operator_spec(
    spec: object,
    problem: FeasibilityProblem,
    r: int | None,
    window_control: ControlMap | None,
    where: str,
) -> None:
    if not isinstance(spec, dict):
        raise ParseError(f"{where}: expected an object")
    kind = spec.get("type")
    if kind in ("projection", "relaxed_projection"):
        idx = spec.get("set")
        if not isinstance(idx, int) or not (1 <= idx <= problem.m):
            raise ParseError(f"{where}: set index must lie in 1..{problem.m}")
        if kind == "relaxed_projection":
            lam = spec.get("lambda")
            if not isinstance(lam, (int, float)) or not (0.0 < float(lam) < 2.0):
                raise ParseError(
                    f"{where}: lambda must lie strictly inside (0, 2) for the "
                    "operator to stay strongly nonexpansive"
                )
    elif kind == "dr":
        idxs = spec.get("sets")
        if not isinstance(idxs, list) or not idxs:
            raise ParseError(f"{where}: 'sets' must be a nonempty index list")
        for idx in idxs:
            if not isinstance(idx, int) or not (1 <= idx <= problem.m):
                raise ParseError(f"{where}: set index must lie in 1..{problem.m}")
    elif kind in ("s_window", "composite_q"):
        if window_control is None or not isinstance(r, int) or r <= 1:
            raise ParseError(
                f"{where}: {kind!r} needs document keys 'window_control' and 'r' > 1"
            )
        if window_control.m != problem.m:
            raise ParseError(
                f"{where}: window_control range 1..{window_control.m} does not "
                f"match the {problem.m} sets"
            )
        if kind == "s_window":
            n = spec.get("n")
            if not isinstance(n, int) or n < 0:
                raise ParseError(f"{where}: 'n' must be a nonnegative integer")
    else:
        raise ParseError(f"{where}: unknown operator type {kind!r}")


def build_operator(
    spec: dict,
    problem: FeasibilityProblem,
    r: int | None = None,
    window_control: ControlMap | None = None,
) -> Operator:
    """Materialize an operator spec against a problem's sets."""
    kind = spec["type"]
    if kind == "projection":
        return Projection(problem.sets[spec["set"] - 1])
    if kind == "relaxed_projection":
        return relax(Projection(problem.sets[spec["set"] - 1]), float(spec["lambda"]))
    if kind == "dr":
        return dr_operator([problem.sets[i - 1] for i in spec["sets"]])
    if kind == "s_window":
        return build_S(problem, window_control, r, spec["n"])
    if kind == "composite_q":
        from .solver import build_composite_Q

        return build_composite_Q(problem, window_control, r)
    raise ParseError(f"unknown operator type {kind!r}")


def _resolve_x0(x0: object, dim: int):
    from .space import Point

    if isinstance(x0, str):
        if x0 == "origin":
            return Point(np.zeros(dim))
        match = _RANDOM_X0.match(x0)
        if match:
            seed, scale = int(match.group(1)), float(match.group(2))
            rng = np.random.default_rng([seed])
            return Point(rng.uniform(-scale, scale, size=dim))
        raise ParseError(
            f"x0 must be a coordinate list, 'origin', or 'random(seed, scale)'; "
            f"got {x0!r}"
        )
    try:
        p = Point(x0)
    except ValueError as exc:
        raise ParseError(f"x0: {exc}") from exc
    if p.dim != dim:
        raise ParseError(f"x0 has dimension {p.dim}, document declares {dim}")
    return p


def resolve_x0(config: RunConfig, problem: FeasibilityProblem):
    """The starting point a config denotes, resolved against the problem dim."""
    return _resolve_x0(config.x0, problem.dim)


def execute_config(problem: FeasibilityProblem, config: RunConfig) -> IterationTrace:
    """Run the scheme a config describes and return its trace."""
    from .solver import run_composite, run_unrestricted_dr, run_unrestricted_product

    x0 = resolve_x0(config, problem)
    certifier = None
    if config.certifier_spec is not None:
        certifier = build_operator(
            config.certifier_spec, problem, config.r, config.window_control
        )
    if config.scheme == "unrestricted_dr":
        return run_unrestricted_dr(
            problem, config.control, config.r, x0, config.stop, certifier
        )
    if config.scheme == "composite_q":
        return run_composite(
            problem, config.control, config.r, x0, config.stop, certifier
        )
    operators = [
        build_operator(spec, problem, config.r, config.window_control)
        for spec in config.operator_specs
    ]
    return run_unrestricted_product(
        operators, config.control, x0, config.stop, problem=problem, certifier=certifier
    )


def serialize_problem(problem: FeasibilityProblem) -> str:
    """Render the problem part back into a JSON document (full precision)."""
    doc: dict = {
        "dimension": problem.dim,
        "sets": [c.params() for c in problem.sets],
    }
    if problem.interior_point is not None:
        doc["interior_point"] = problem.interior_point.coords.tolist()
    return json.dumps(doc, indent=2)


def load_document(path) -> tuple[FeasibilityProblem, RunConfig | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())


def format_trace(trace: IterationTrace, dim: int) -> str:
    """Comma-separated trace table: one header line, then one row per step."""
    with_certifier = any(s.certifier_residual is not None for s in trace.steps)
    header = ["n", "applied_operator_id", "displacement", "max_set_distance"]
    header += [f"coord_{i + 1}" for i in range(dim)]
    if with_certifier:
        header.append("certifier_residual")
    lines = [",".join(header)]
    for s in trace.steps:
        row = [str(s.n), s.applied_operator_id, repr(float(s.displacement)),
               repr(float(s.max_set_distance))]
        row += [repr(float(c)) for c in s.iterate.coords]
        if with_certifier:
            row.append(repr(float(s.certifier_residual)))
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_trace(trace: IterationTrace, dim: int, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_trace(trace, dim))


def format_reports(reports: list[PropertyReport]) -> str:
    """Property reports in the same tabular text format as traces."""
    lines = ["property_name,samples,worst_violation,tolerance,pass"]
    for rep in reports:
        lines.append(
            f"{rep.property_name},{rep.samples},{rep.worst_violation!r},"
            f"{rep.tolerance!r},{'true' if rep.passed else 'false'}"
        )
    return "\n".join(lines) + "\n"
