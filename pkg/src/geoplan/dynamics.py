"""Right-hand sides of the reduced necessary conditions on SO(3).

All families share one state container (h, xi, eta, eta_dot): the
fourth-order left-invariant system uses the slots literally, while the
third-order bi-invariant and sphere systems store (xi_dot, xi_ddot) in the
(eta, eta_dot) slots. Obstacles beyond the first get their own relative
rotation carried in extra_h.
"""

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _kernels as _k
from .algebra import _mat, _vec
from .errors import AntipodalSingularity, FiberDegenerate
from .metric import InertiaTensor
from .potential import ObstacleSpec

__all__ = [
    "ReducedState",
    "StateDerivative",
    "ReducedSystem",
    "rhs_geodesic",
    "rhs_euler",
    "rhs_left_invariant",
    "rhs_bi_invariant",
    "make_system",
]

_EYE = np.eye(3)
_EYE.flags.writeable = False
_NO_OBS = np.zeros(0)
_NO_OBS.flags.writeable = False


@dataclass
class ReducedState:
    """Shooting state: relative pose h plus body-frame derivatives."""

    h: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    eta_dot: np.ndarray
    extra_h: tuple = ()

    def __post_init__(self):
        self.h = _mat(self.h)
        self.xi = _vec(self.xi)
        self.eta = _vec(self.eta)
        self.eta_dot = _vec(self.eta_dot)
        self.extra_h = tuple(_mat(x) for x in self.extra_h)


@dataclass
class StateDerivative:
    dh: np.ndarray
    dxi: np.ndarray
    deta: np.ndarray
    deta_dot: np.ndarray
    extra_dh: tuple = ()


def _obstacle_tuple(obstacles) -> tuple:
    if obstacles is None:
        return ()
    if isinstance(obstacles, ObstacleSpec):
        return (obstacles,)
    return tuple(obstacles)


def _obstacle_arrays(obstacles: tuple):
    if not obstacles:
        return _NO_OBS, _NO_OBS, _NO_OBS
    taus = np.array([o.tau for o in obstacles], dtype=np.float64)
    ds = np.array([o.d_scale for o in obstacles], dtype=np.float64)
    ns = np.array([float(o.n_exp) for o in obstacles], dtype=np.float64)
    return taus, ds, ns


def pack_state(s: ReducedState, m: int) -> np.ndarray:
    if len(s.extra_h) != m - 1:
        raise ValueError(f"state carries {len(s.extra_h)} extra rotations, expected {m - 1}")
    y = np.empty(9 * m + 9)
    y[0:9] = s.h.ravel()
    for b, x in enumerate(s.extra_h, start=1):
        y[9 * b : 9 * b + 9] = x.ravel()
    base = 9 * m
    y[base : base + 3] = s.xi
    y[base + 3 : base + 6] = s.eta
    y[base + 6 : base + 9] = s.eta_dot
    return y


def unpack_state(y: np.ndarray, m: int) -> ReducedState:
    base = 9 * m
    return ReducedState(
        h=y[0:9].reshape(3, 3).copy(),
        xi=y[base : base + 3].copy(),
        eta=y[base + 3 : base + 6].copy(),
        eta_dot=y[base + 6 : base + 9].copy(),
        extra_h=tuple(y[9 * b : 9 * b + 9].reshape(3, 3).copy() for b in range(1, m)),
    )


def _raise_for_status(st: int):
    if st == _k.ERR_ANTIPODAL:
        raise AntipodalSingularity("relative pose reached the tr(H) = -1 gradient singularity")
    if st == _k.ERR_FIBER:
        raise FiberDegenerate("fiber-distance minimizer is not isolated")
    raise RuntimeError(f"kernel status {st}")


@dataclass
class ReducedSystem:
    """Callable right-hand side carrying the packed-kernel parameters.

    Instances work with the generic integrator as plain rhs callables and
    also unlock the fused integration fast path.
    """

    family: str
    mode: int
    exact: int = 0
    J: InertiaTensor | None = None
    obstacles: tuple = ()
    base_frames: tuple = ()
    _arrays: tuple = field(default=None, repr=False)

    def __post_init__(self):
        self.obstacles = _obstacle_tuple(self.obstacles)
        if self._arrays is None:
            self._arrays = _obstacle_arrays(self.obstacles)

    @property
    def n_obs(self) -> int:
        return len(self.obstacles)

    @property
    def m(self) -> int:
        return max(1, self.n_obs)

    @property
    def jm(self) -> np.ndarray:
        return self.J.j if self.J is not None else _EYE

    @property
    def jinv(self) -> np.ndarray:
        return self.J.j_inv if self.J is not None else _EYE

    @property
    def primary_frame(self) -> np.ndarray:
        return self.base_frames[0] if self.base_frames else _EYE

    def kernel_args(self):
        taus, ds, ns = self._arrays
        return self.m, self.n_obs, self.mode, self.exact, taus, ds, ns, self.jm, self.jinv

    def __call__(self, s: ReducedState) -> StateDerivative:
        m = self.m
        y = pack_state(s, m)
        dy = np.empty_like(y)
        taus, ds, ns = self._arrays
        st = _k.rhs_packed(y, dy, m, self.n_obs, self.mode, self.exact, taus, ds, ns, self.jm, self.jinv)
        if st != _k.OK:
            _raise_for_status(st)
        base = 9 * m
        return StateDerivative(
            dh=dy[0:9].reshape(3, 3).copy(),
            dxi=dy[base : base + 3].copy(),
            deta=dy[base + 3 : base + 6].copy(),
            deta_dot=dy[base + 6 : base + 9].copy(),
            extra_dh=tuple(dy[9 * b : 9 * b + 9].reshape(3, 3).copy() for b in range(1, m)),
        )


def make_system(
    family: str,
    J: InertiaTensor | None = None,
    obstacles=None,
    exact_theta: bool = False,
    base_frames: Sequence[np.ndarray] = (),
) -> ReducedSystem:
    """Build the reduced system for a dynamics family.

    family is one of 'left_invariant', 'mixed', 'bi_invariant', 'sphere';
    'left_invariant' and 'mixed' share the same equations.
    """
    obstacles = _obstacle_tuple(obstacles)
    if family in ("left_invariant", "mixed"):
        if J is None:
            raise ValueError(f"{family} dynamics require an inertia tensor")
        mode, exact = _k.MODE_LEFT, 0
    elif family == "bi_invariant":
        mode, exact = _k.MODE_BI, 0
        J = None
    elif family == "sphere":
        mode, exact = _k.MODE_SPHERE, 1 if exact_theta else 0
        J = None
    else:
        raise ValueError(f"unknown dynamics family {family!r}")
    return ReducedSystem(
        family=family,
        mode=mode,
        exact=exact,
        J=J,
        obstacles=obstacles,
        base_frames=tuple(_mat(f) for f in base_frames),
    )


def rhs_geodesic(J: InertiaTensor, xi) -> np.ndarray:
    """Geodesic equation xi_dot = -connection(xi, xi)."""
    xi = _vec(xi)
    return -_k.gconn_k(J.j, J.j_inv, xi, xi)


def rhs_euler(J: InertiaTensor, omega) -> np.ndarray:
    """Rigid-body Euler equation: omega_dot = Jinv (J omega x omega)."""
    omega = _vec(omega)
    return _k.mat3_vec(J.j_inv, _k.cross3(_k.mat3_vec(J.j, omega), omega))


def rhs_left_invariant(J: InertiaTensor, obstacles, s: ReducedState) -> StateDerivative:
    """Fourth-order modified-cubic system for a left-invariant metric.

    The obstacle gradient uses the bi-invariant distance composed with the
    inertia inverse; pass obstacles=None (or tau=0) for the plain cubic.
    """
    return ReducedSystem(family="left_invariant", mode=_k.MODE_LEFT, J=J, obstacles=obstacles)(s)


def rhs_bi_invariant(obstacles, s: ReducedState) -> StateDerivative:
    """Third-order chain for a bi-invariant metric; slots hold (xi, xi', xi'')."""
    return ReducedSystem(family="bi_invariant", mode=_k.MODE_BI, obstacles=obstacles)(s)


RhsFunction = Callable[[ReducedState], StateDerivative]
