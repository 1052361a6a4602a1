"""Command line interface.

Subcommands: plan (solve the boundary value problem), simulate (integrate
the initial value problem with explicit unknowns), sweep (comparative runs
over one obstacle parameter), check (run the built-in identity suite).

Exit codes: 0 success, 1 non-convergence or failed checks (reports are
still written), 2 parse/validation failure, 3 runtime numerical error.
"""

import argparse
import concurrent.futures
import json
import logging
import os
import sys
from pathlib import Path

from .errors import GeoplanError, ParseError, ValidationError
from .runner import run_scenario, simulate_scenario, write_trajectory
from .scenario import load_scenario, parse_scenario

log = logging.getLogger("geoplan")

EXIT_OK = 0
EXIT_NO_CONVERGENCE = 1
EXIT_PARSE = 2
EXIT_NUMERICAL = 3

SWEEP_PARAMS = ("tau", "d_scale", "n_exp")


def _configure_logging(quiet: bool):
    level_name = os.environ.get("GEOPLAN_LOG", "WARNING").upper()
    level = getattr(logging, level_name, logging.WARNING)
    if quiet:
        level = max(level, logging.ERROR)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _emit(quiet: bool, text: str):
    if not quiet:
        print(text)


def _report_lines(report):
    lines = [
        f"converged: {str(report.converged).lower()}",
        f"residual: {report.residual_norm:.6e}",
        f"iterations: {report.iterations}",
    ]
    for i, d in enumerate(report.min_dist):
        lines.append(f"min distance to obstacle {i}: {d:.9f}")
    lines.append(f"wall time: {report.wall_time:.3f} s")
    if report.error:
        lines.append(f"error: {report.error}")
    return lines


def _cmd_plan(args) -> int:
    scenario = load_scenario(args.scenario)
    report = run_scenario(scenario)
    for line in _report_lines(report):
        _emit(args.quiet, line)
    if args.output and report.samples:
        write_trajectory(report.samples, args.format, args.output)
        _emit(args.quiet, f"trajectory written to {args.output}")
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    samples = simulate_scenario(scenario)
    _emit(args.quiet, f"integrated {len(samples)} samples over {scenario.bc.t_span}")
    if args.output:
        write_trajectory(samples, args.format, args.output)
        _emit(args.quiet, f"trajectory written to {args.output}")
    return EXIT_OK


def _sweep_one(scenario_text: str, param: str, value: float, output: str | None, fmt: str):
    scenario = parse_scenario(scenario_text)
    doc = dict(scenario.raw)
    obstacles = [dict(o) for o in doc.get("obstacles", [])]
    for o in obstacles:
        o[param] = value if param != "n_exp" else int(value)
    doc["obstacles"] = obstacles
    scenario = parse_scenario(json.dumps(doc))
    report = run_scenario(scenario)
    if output and report.samples:
        write_trajectory(report.samples, fmt, output)
    return {
        "value": value,
        "converged": report.converged,
        "residual": report.residual_norm,
        "iterations": report.iterations,
        "min_dist": min(report.min_dist) if report.min_dist else float("nan"),
        "output": output,
    }


def _sweep_output(base: str | None, param: str, value: float) -> str | None:
    if base is None:
        return None
    path = Path(base)
    tag = f"{param}{value:g}".replace(".", "p").replace("-", "m")
    return str(path.with_name(f"{path.stem}_{tag}{path.suffix}"))


def _cmd_sweep(args) -> int:
    try:
        with open(args.scenario, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read scenario file {args.scenario}: {exc}") from exc
    parse_scenario(text)  # fail fast on a bad document
    if args.param not in SWEEP_PARAMS:
        raise ValidationError(f"sweep parameter must be one of {SWEEP_PARAMS}")
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"cannot parse sweep values {args.values!r}") from exc
    if not values:
        raise ValidationError("sweep needs at least one value")

    jobs = [(v, _sweep_output(args.output, args.param, v)) for v in values]
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [
                pool.submit(_sweep_one, text, args.param, v, out, args.format)
                for v, out in jobs
            ]
            results = [f.result() for f in futures]
    else:
        results = [_sweep_one(text, args.param, v, out, args.format) for v, out in jobs]

    _emit(args.quiet, f"{args.param:>10}  converged  iterations  residual      min_dist")
    for r in results:
        _emit(
            args.quiet,
            f"{r['value']:>10g}  {str(r['converged']).lower():>9}  {r['iterations']:>10d}  "
            f"{r['residual']:<12.3e}  {r['min_dist']:.9f}",
        )
    return EXIT_OK if all(r["converged"] for r in results) else EXIT_NO_CONVERGENCE


def _cmd_check(args) -> int:
    from .checks import run_checks

    results = run_checks()
    width = max(len(r.name) for r in results)
    ok = True
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        ok = ok and r.passed
        _emit(args.quiet, f"[{status}] {r.name:<{width}}  {r.detail}")
    _emit(args.quiet, "all checks passed" if ok else "some checks FAILED")
    return EXIT_OK if ok else EXIT_NO_CONVERGENCE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geoplan",
        description="Obstacle-avoiding trajectory planning on SO(3) and the sphere",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, scenario=True):
        if scenario:
            p.add_argument("scenario", help="path to a scenario JSON file")
        p.add_argument("--output", help="trajectory output path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--quiet", action="store_true", help="suppress non-error output")

    p_plan = sub.add_parser("plan", help="solve the boundary value problem")
    add_common(p_plan)
    p_plan.set_defaults(func=_cmd_plan)

    p_sim = sub.add_parser("simulate", help="integrate the IVP with explicit unknowns")
    add_common(p_sim)
    p_sim.set_defaults(func=_cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="comparative runs over one obstacle parameter")
    add_common(p_sweep)
    p_sweep.add_argument("--param", default="tau", help="obstacle parameter to sweep")
    p_sweep.add_argument("--values", required=True, help="comma-separated parameter values")
    p_sweep.add_argument("--jobs", type=int, default=1, help="concurrent runs")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_check = sub.add_parser("check", help="run the built-in identity/property suite")
    p_check.add_argument("--quiet", action="store_true", help="suppress non-error output")
    p_check.set_defaults(func=_cmd_check)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(getattr(args, "quiet", False))
    try:
        return args.func(args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GeoplanError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
