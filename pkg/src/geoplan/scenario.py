"""Scenario documents: JSON parsing, validation and problem construction.

Rotations in scenario files are axis-angle triples (radians) converted
through the exponential map; sphere data are unit points plus tangent
velocities. Defaults follow the planner conventions: tau=50, d_scale=0.2,
n_exp=2, n_steps=200, tol=1e-6.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .algebra import exp_so3
from .errors import ParseError, ValidationError
from .metric import InertiaTensor
from .potential import MetricMode, ObstacleSpec
from .shooting import BoundaryConditions, ShootingProblem
from .sphere import SphereBoundary

__all__ = ["Scenario", "parse_scenario", "load_scenario", "build_problem"]

_SPACES = ("SO3", "S2")
_METRICS = ("left_invariant", "bi_invariant", "mixed")
_TOP_KEYS = {
    "space",
    "metric",
    "inertia",
    "obstacles",
    "boundary",
    "time",
    "solver",
    "potential_mode",
    "seed",
    "initial",
}


@dataclass
class Scenario:
    """Validated planning scenario."""

    space: str
    metric: str
    inertia: InertiaTensor | None
    obstacles: tuple
    bc: BoundaryConditions
    n_steps: int
    tol: float = 1e-6
    max_iters: int = 100
    homotopy_stages: int = 8
    potential_mode: str = "local"
    seed: int = 0
    initial: np.ndarray | None = None
    raw: dict = field(default=None, repr=False)

    @property
    def dynamics(self) -> str:
        if self.space == "S2":
            return "sphere"
        return self.metric


def _expect(cond: bool, invariant: str):
    if not cond:
        raise ValidationError(invariant)


def _finite_vec(value, name, size):
    try:
        v = np.asarray(value, dtype=np.float64).reshape(size)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be a length-{size} numeric vector") from exc
    _expect(bool(np.all(np.isfinite(v))), f"{name} must be finite")
    return v


def _finite_scalar(value, name) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name} must be a number") from exc
    _expect(np.isfinite(x), f"{name} must be finite")
    return x


def _axis_angle(value, name) -> np.ndarray:
    return exp_so3(_finite_vec(value, name, 3))


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document (JSON syntax)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid scenario JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("scenario document must be a JSON object")
    unknown = set(doc) - _TOP_KEYS
    _expect(not unknown, f"unknown scenario fields: {sorted(unknown)}")

    space = doc.get("space")
    _expect(space in _SPACES, f"space must be one of {_SPACES}")

    metric = doc.get("metric", "bi_invariant")
    _expect(metric in _METRICS, f"metric must be one of {_METRICS}")
    if space == "S2":
        _expect(
            metric == "bi_invariant",
            "S2 scenarios require the bi_invariant metric (the only computable distance mode)",
        )

    inertia = None
    if "inertia" in doc:
        _expect(
            metric in ("left_invariant", "mixed"),
            "inertia applies only to left_invariant or mixed metrics",
        )
        raw = doc["inertia"]
        arr = np.asarray(raw, dtype=np.float64)
        try:
            if arr.shape == (3,):
                inertia = InertiaTensor.from_diagonal(arr)
            elif arr.shape == (3, 3):
                inertia = InertiaTensor.from_matrix(arr)
            else:
                raise ValidationError("inertia must be a diagonal triple or a 3x3 matrix")
        except ValueError as exc:
            raise ValidationError(f"invalid inertia tensor: {exc}") from exc
    elif metric in ("left_invariant", "mixed"):
        raise ValidationError(f"{metric} metric requires an inertia field")

    mode = MetricMode.LEFT_WITH_BI_DISTANCE if metric == "mixed" else MetricMode.BI_INVARIANT
    obstacles = []
    for i, od in enumerate(doc.get("obstacles", [])):
        _expect(isinstance(od, dict), f"obstacle {i} must be an object")
        kwargs = {
            "tau": _finite_scalar(od.get("tau", 50.0), f"obstacle {i} tau"),
            "d_scale": _finite_scalar(od.get("d_scale", 0.2), f"obstacle {i} d_scale"),
            "n_exp": od.get("n_exp", 2),
            "metric_mode": mode,
        }
        if space == "S2":
            _expect("point" in od, f"obstacle {i} on S2 needs a point")
            kwargs["point"] = _finite_vec(od["point"], f"obstacle {i} point", 3)
        else:
            _expect("pose" in od, f"obstacle {i} on SO3 needs an axis-angle pose")
            kwargs["pose"] = _axis_angle(od["pose"], f"obstacle {i} pose")
        try:
            obstacles.append(ObstacleSpec(**kwargs))
        except ValueError as exc:
            raise ValidationError(f"obstacle {i}: {exc}") from exc
    _expect(
        metric != "left_invariant" or all(o.tau == 0 for o in obstacles),
        "left_invariant distance mode cannot evaluate obstacle potentials; use mixed",
    )

    tdoc = doc.get("time", {})
    a = _finite_scalar(tdoc.get("a", 0.0), "time.a")
    b = _finite_scalar(tdoc.get("b", 1.0), "time.b")
    _expect(b > a, "time must satisfy b > a")
    n_steps = int(tdoc.get("n_steps", 200))
    _expect(n_steps >= 1, "time.n_steps must be >= 1")

    bdoc = doc.get("boundary")
    _expect(isinstance(bdoc, dict), "scenario requires a boundary object")
    try:
        if space == "S2":
            hint = None
            if "antipode_hint" in bdoc:
                hint = _finite_vec(bdoc["antipode_hint"], "boundary.antipode_hint", 3)
            ba = SphereBoundary(
                _finite_vec(bdoc["q_a"], "boundary.q_a", 3),
                _finite_vec(bdoc["v_a"], "boundary.v_a", 3),
            )
            bb = SphereBoundary(
                _finite_vec(bdoc["q_b"], "boundary.q_b", 3),
                _finite_vec(bdoc["v_b"], "boundary.v_b", 3),
            )
            bc = BoundaryConditions.from_sphere(ba, bb, (a, b), antipode_hint=hint)
        else:
            bc = BoundaryConditions(
                g_a=_axis_angle(bdoc["g_a"], "boundary.g_a"),
                g_b=_axis_angle(bdoc["g_b"], "boundary.g_b"),
                xi_a=_finite_vec(bdoc["xi_a"], "boundary.xi_a", 3),
                xi_b=_finite_vec(bdoc["xi_b"], "boundary.xi_b", 3),
                t_span=(a, b),
            )
    except KeyError as exc:
        raise ValidationError(f"boundary is missing field {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ValidationError(f"invalid boundary: {exc}") from exc

    sdoc = doc.get("solver", {})
    tol = _finite_scalar(sdoc.get("tol", 1e-6), "solver.tol")
    _expect(tol > 0, "solver.tol must be > 0")
    max_iters = int(sdoc.get("max_iters", 100))
    _expect(max_iters >= 1, "solver.max_iters must be >= 1")
    stages = int(sdoc.get("homotopy_stages", 8))
    _expect(stages >= 1, "solver.homotopy_stages must be >= 1")

    potential_mode = doc.get("potential_mode", "local")
    _expect(
        potential_mode in ("local", "exact_theta"),
        "potential_mode must be 'local' or 'exact_theta'",
    )
    _expect(
        potential_mode == "local" or space == "S2",
        "potential_mode applies to S2 scenarios only",
    )

    seed = int(doc.get("seed", 0))

    initial = None
    if "initial" in doc:
        idoc = doc["initial"]
        _expect(isinstance(idoc, dict), "initial must be an object with eta and eta_dot")
        initial = np.concatenate(
            [
                _finite_vec(idoc.get("eta", (0.0, 0.0, 0.0)), "initial.eta", 3),
                _finite_vec(idoc.get("eta_dot", (0.0, 0.0, 0.0)), "initial.eta_dot", 3),
            ]
        )

    return Scenario(
        space=space,
        metric=metric,
        inertia=inertia,
        obstacles=tuple(obstacles),
        bc=bc,
        n_steps=n_steps,
        tol=tol,
        max_iters=max_iters,
        homotopy_stages=stages,
        potential_mode=potential_mode,
        seed=seed,
        initial=initial,
        raw=doc,
    )


def load_scenario(path) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario(text)


def build_problem(s: Scenario) -> ShootingProblem:
    return ShootingProblem(
        dynamics=s.dynamics,
        bc=s.bc,
        J=s.inertia,
        obstacles=s.obstacles,
        n_steps=s.n_steps,
        potential_mode=s.potential_mode,
    )
