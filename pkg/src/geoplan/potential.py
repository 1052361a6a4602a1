"""Obstacle-avoidance potential family and its reduced body-frame gradient.

The potential is tau / (1 + (d/D)^(2N)) in the bi-invariant distance
d = rotation_angle(H) of the relative pose H. The gradient is returned with
the sign convention that the reduced dynamics ADD it verbatim: it equals the
left-trivialized Riemannian gradient of the potential, -c(d) Log(H), pinned
by the finite-difference consistency tests.
"""

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .algebra import _mat, _vec
from .errors import AntipodalSingularity
from .metric import InertiaTensor

__all__ = [
    "MetricMode",
    "ObstacleSpec",
    "distance_to_obstacle",
    "potential_value",
    "reduced_gradient",
]


class MetricMode(enum.Enum):
    BI_INVARIANT = "bi_invariant"
    LEFT_WITH_BI_DISTANCE = "left_with_bi_distance"


@dataclass(frozen=True)
class ObstacleSpec:
    """Obstacle pose (on SO(3)) or point (on the sphere) plus potential shape."""

    tau: float = 50.0
    d_scale: float = 0.2
    n_exp: int = 2
    metric_mode: MetricMode = MetricMode.BI_INVARIANT
    pose: np.ndarray | None = None
    point: np.ndarray | None = None

    def __post_init__(self):
        if not (self.tau >= 0.0 and np.isfinite(self.tau)):
            raise ValueError("tau must be finite and >= 0")
        if not (self.d_scale > 0.0 and np.isfinite(self.d_scale)):
            raise ValueError("d_scale must be finite and > 0")
        if int(self.n_exp) != self.n_exp or self.n_exp < 1:
            raise ValueError("n_exp must be an integer >= 1")
        if self.pose is not None and self.point is not None:
            raise ValueError("obstacle takes a pose or a point, not both")
        if self.pose is not None:
            object.__setattr__(self, "pose", _mat(self.pose))
        if self.point is not None:
            q = _vec(self.point)
            if abs(np.linalg.norm(q) - 1.0) > 1e-12:
                raise ValueError("obstacle point must be a unit vector (within 1e-12)")
            object.__setattr__(self, "point", q)


def distance_to_obstacle(H) -> float:
    """Bi-invariant distance of the relative pose H from the obstacle frame."""
    return _k.rot_angle(_mat(H))


def potential_value(spec: ObstacleSpec, H) -> float:
    """Potential height at relative pose H."""
    return float(
        _k.potential_value_k(distance_to_obstacle(H), spec.tau, spec.d_scale, float(spec.n_exp))
    )


def reduced_gradient(spec: ObstacleSpec, H, J: InertiaTensor | None = None) -> np.ndarray:
    """Body-frame gradient term that the reduced dynamics add.

    In BI_INVARIANT mode this is the left-trivialized gradient with respect
    to the bi-invariant metric; in LEFT_WITH_BI_DISTANCE mode the inertia
    inverse is composed on top. Zero at H = I for every N >= 1.
    """
    H = _mat(H)
    out = np.empty(3)
    st = _k.grad_local_k(H, spec.tau, spec.d_scale, float(spec.n_exp), out)
    if st != _k.OK:
        raise AntipodalSingularity(
            f"potential gradient undefined near tr(H) = -1 (tr = {np.trace(H):.12f})"
        )
    if spec.metric_mode is MetricMode.LEFT_WITH_BI_DISTANCE:
        if J is None:
            raise ValueError("LEFT_WITH_BI_DISTANCE mode requires an inertia tensor")
        out = _k.mat3_vec(J.j_inv, out)
    return out
