"""Command-line harness: run problem documents, check operator properties,
reproduce the bundled experiments, and batch directories of problems.

Exit codes: 0 converged / all checks pass, 1 not converged / a check failed,
2 malformed input or I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .control import cover_index, window
from .diagnostics import check_firmly_nonexpansive, check_nonexpansive
from .operators import Projection, Reflection, composite_reflection
from .problem_io import (
    ParseError,
    build_operator,
    execute_config,
    format_reports,
    load_document,
    write_trace,
)
from .repro import EXPERIMENTS, run_experiment
from .solver import CONVERGED_DISPLACEMENT, FEASIBLE, build_S, build_composite_Q

EXIT_OK = 0
EXIT_NOT_CONVERGED = 1
EXIT_INPUT_ERROR = 2

CONVERGED_STATUSES = (CONVERGED_DISPLACEMENT, FEASIBLE)


def _run_one(problem, config, trace_path: Path) -> int:
    trace = execute_config(problem, config)
    write_trace(trace, problem.dim, trace_path)
    print(
        f"status={trace.terminal_status} iterations={trace.iterations} "
        f"final_max_set_distance={trace.final.max_set_distance!r}"
    )
    print(f"trace written to {trace_path}")
    return EXIT_OK if trace.terminal_status in CONVERGED_STATUSES else EXIT_NOT_CONVERGED


def cmd_run(args) -> int:
    problem, config = load_document(args.problem)
    if config is None:
        raise ParseError("document has no 'scheme'; nothing to run")
    trace_path = args.trace or config.trace_path or args.problem.with_suffix(".trace.csv")
    return _run_one(problem, config, Path(trace_path))


def _check_suite(problem, config):
    """Every operator a config would construct, with its strongest checkable
    property ('firm' for projections and DR operators, 'ne' otherwise)."""
    suite = []
    for i, c in enumerate(problem.sets):
        suite.append((f"P(C{i + 1})", Projection(c), "firm"))
        suite.append((f"R(C{i + 1})", Reflection(c), "ne"))
    if config is None:
        return suite
    if config.scheme in ("unrestricted_dr", "composite_q"):
        f, r = config.control, config.r
        for n in range(cover_index(f) + 1):
            picked = [problem.sets[i - 1] for i in window(f, r, n)]
            suite.append((f"S{n}", build_S(problem, f, r, n), "firm"))
            suite.append((f"V{n}", composite_reflection(picked), "ne"))
        if config.scheme == "composite_q":
            suite.append(("Q", build_composite_Q(problem, f, r), "ne"))
    else:
        for k, spec in enumerate(config.operator_specs):
            op = build_operator(spec, problem, config.r, config.window_control)
            strongest = "firm" if spec["type"] in ("projection", "dr", "s_window") else "ne"
            suite.append((f"T{k + 1}", op, strongest))
    if config.certifier_spec is not None:
        op = build_operator(config.certifier_spec, problem, config.r, config.window_control)
        suite.append(("certifier", op, "ne"))
    return suite


def cmd_check(args) -> int:
    problem, config = load_document(args.problem)
    scale = args.scale if args.scale is not None else problem.sampling_scale()
    reports = []
    for name, op, strongest in _check_suite(problem, config):
        if strongest == "firm":
            reports.append(
                check_firmly_nonexpansive(
                    op, args.samples, scale, args.seed,
                    name=f"firmly_nonexpansive[{name}]",
                )
            )
        else:
            reports.append(
                check_nonexpansive(
                    op, args.samples, scale, args.seed,
                    name=f"nonexpansive[{name}]",
                )
            )
    table = format_reports(reports)
    print(table, end="")
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(table)
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} property reports pass")
    return EXIT_OK if not failed else EXIT_NOT_CONVERGED


def cmd_repro(args) -> int:
    ac_id = args.ac_id.upper()
    if ac_id not in EXPERIMENTS:
        raise ParseError(
            f"unknown experiment {args.ac_id!r}; choose from {', '.join(EXPERIMENTS)}"
        )
    if args.trace_dir is not None:
        args.trace_dir.mkdir(parents=True, exist_ok=True)
    ok = run_experiment(ac_id, args.trace_dir)
    return EXIT_OK if ok else EXIT_NOT_CONVERGED


def cmd_batch(args) -> int:
    if not args.directory.is_dir():
        raise ParseError(f"{args.directory} is not a directory")
    paths = sorted(args.directory.glob("*.json"))
    if not paths:
        raise ParseError(f"no *.json problem documents in {args.directory}")
    out_dir = args.out_dir or args.directory
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = EXIT_OK
    for path in paths:
        problem, config = load_document(path)
        if config is None:
            raise ParseError(f"{path}: document has no 'scheme'; nothing to run")
        trace_path = out_dir / (path.stem + ".trace.csv")
        trace = execute_config(problem, config)
        write_trace(trace, problem.dim, trace_path)
        converged = trace.terminal_status in CONVERGED_STATUSES
        worst = max(worst, EXIT_OK if converged else EXIT_NOT_CONVERGED)
        print(
            f"{path.name}: status={trace.terminal_status} "
            f"iterations={trace.iterations} "
            f"final_max_set_distance={trace.final.max_set_distance!r}"
        )
    return worst


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drfeas",
        description="Douglas-Rachford feasibility runs, property checks, and "
        "bundled experiment reproductions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the scheme a problem document describes")
    p_run.add_argument("problem", type=Path, help="problem document (JSON)")
    p_run.add_argument("--trace", type=Path, default=None,
                       help="trace output path (default: <problem>.trace.csv)")
    p_run.set_defaults(fn=cmd_run)

    p_check = sub.add_parser(
        "check", help="sampled operator-property checks for a problem document"
    )
    p_check.add_argument("problem", type=Path)
    p_check.add_argument("--samples", type=int, default=1000)
    p_check.add_argument("--seed", type=int, default=0)
    p_check.add_argument("--scale", type=float, default=None,
                         help="sampling half-width (default: 4x problem magnitude)")
    p_check.add_argument("--out", type=Path, default=None,
                         help="also write the report table to this path")
    p_check.set_defaults(fn=cmd_check)

    p_repro = sub.add_parser("repro", help="reproduce a bundled experiment")
    p_repro.add_argument("ac_id", metavar="AC-ID",
                         help=f"one of {', '.join(EXPERIMENTS)}")
    p_repro.add_argument("--trace-dir", type=Path, default=None,
                         help="write run traces into this directory")
    p_repro.set_defaults(fn=cmd_repro)

    p_batch = sub.add_parser("batch", help="run every *.json document in a directory")
    p_batch.add_argument("directory", type=Path)
    p_batch.add_argument("--out-dir", type=Path, default=None,
                         help="directory for trace files (default: alongside inputs)")
    p_batch.set_defaults(fn=cmd_batch)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
