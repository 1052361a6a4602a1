"""Scenario execution and trajectory serialization."""

import time
from dataclasses import dataclass

import numpy as np

from .errors import HomotopyStall, IoError, NoConvergence
from .scenario import Scenario, build_problem
from .shooting import solve
from .integrators import integrate

__all__ = ["Report", "run_scenario", "simulate_scenario", "write_trajectory"]


@dataclass
class Report:
    """Outcome of one planning run."""

    converged: bool
    residual_norm: float
    iterations: int
    min_dist: tuple
    samples: list
    wall_time: float
    error: str | None = None


def run_scenario(s: Scenario) -> Report:
    """Build the shooting problem and solve it; never raises on non-convergence."""
    problem = build_problem(s)
    start = time.perf_counter()
    try:
        planned = solve(
            problem,
            tol=s.tol,
            max_iters=s.max_iters,
            homotopy_stages=s.homotopy_stages,
            seed=s.seed,
        )
        wall = time.perf_counter() - start
        return Report(
            converged=planned.converged,
            residual_norm=planned.residual_norm,
            iterations=planned.iterations,
            min_dist=planned.min_obstacle_dists,
            samples=planned.samples,
            wall_time=wall,
        )
    except (NoConvergence, HomotopyStall) as exc:
        wall = time.perf_counter() - start
        best = exc.best
        return Report(
            converged=False,
            residual_norm=best.residual_norm if best is not None else float("inf"),
            iterations=exc.diagnostics.get("iterations", 0),
            min_dist=best.min_obstacle_dists if best is not None else (),
            samples=best.samples if best is not None else [],
            wall_time=wall,
            error=str(exc),
        )


def simulate_scenario(s: Scenario) -> list:
    """Integrate the initial value problem with explicitly given unknowns."""
    problem = build_problem(s)
    unknowns = s.initial if s.initial is not None else np.zeros(6)
    s0 = problem.initial_state(unknowns)
    return integrate(
        problem.system(1.0), s0, problem.bc.t_span, problem.n_steps, record_every=problem.record_every
    )


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _columns(samples):
    with_q = samples[0].q is not None
    cols = ["t"]
    cols += [f"h{i}{j}" for i in range(3) for j in range(3)]
    cols += ["xi_x", "xi_y", "xi_z", "eta_x", "eta_y", "eta_z", "etadot_x", "etadot_y", "etadot_z"]
    if with_q:
        cols += ["qx", "qy", "qz"]
    cols += ["dist", "V"]
    return cols, with_q


def _row_values(s, with_q):
    vals = [s.t]
    vals += [s.h[i, j] for i in range(3) for j in range(3)]
    vals += list(s.xi) + list(s.eta) + list(s.eta_dot)
    if with_q:
        vals += list(s.q)
    vals += [s.dist, s.v_pot]
    return vals


def write_trajectory(samples, fmt: str, destination) -> None:
    """Serialize samples as CSV or JSON with 17 significant digits."""
    if not samples:
        raise ValueError("cannot write an empty trajectory")
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown trajectory format {fmt!r}")
    cols, with_q = _columns(samples)
    lines = []
    if fmt == "csv":
        lines.append(",".join(cols))
        for s in samples:
            lines.append(",".join(_fmt(v) for v in _row_values(s, with_q)))
        text = "\n".join(lines) + "\n"
    else:
        rows = []
        for s in samples:
            pairs = ", ".join(
                f'"{c}": {_fmt(v)}' for c, v in zip(cols, _row_values(s, with_q))
            )
            rows.append("  {" + pairs + "}")
        text = "[\n" + ",\n".join(rows) + "\n]\n"
    try:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write trajectory to {destination}: {exc}") from exc
