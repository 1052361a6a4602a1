"""The unit-sphere specialization: SO(3)/SO(2) with the stabilizer of e3.

Horizontal algebra vectors span {e1, e2}; the projection sends a rotation R
to R e3. The symmetric-space structure makes the horizontal connection
vanish on horizontal pairs, so only the curvature-like tensor and the fiber
machinery carry content here.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .algebra import _mat, _vec
from .dynamics import ReducedState, ReducedSystem, StateDerivative, make_system
from .errors import AntipodalLiftAmbiguity, FiberDegenerate, NotHorizontal

__all__ = [
    "SpherePoint",
    "SphereBoundary",
    "project_horizontal",
    "project_vertical",
    "h_connection",
    "q_tilde",
    "rhs_sphere",
    "theta_fiber",
    "lift_boundary",
    "project_sphere",
    "frame_from_point",
]

_E3 = np.array([0.0, 0.0, 1.0])
_E3.flags.writeable = False

HORIZONTAL_TOL = 1e-12


@dataclass(frozen=True)
class SpherePoint:
    """Unit vector on the sphere."""

    q: np.ndarray

    def __post_init__(self):
        q = _vec(self.q)
        if abs(np.linalg.norm(q) - 1.0) > 1e-9:
            raise ValueError(f"sphere point must be unit length (|q| = {np.linalg.norm(q):.12f})")
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class SphereBoundary:
    """Sphere point with a tangent velocity."""

    q: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        q = SpherePoint(self.q).q
        v = _vec(self.v)
        if abs(float(q @ v)) > 1e-9:
            raise ValueError(f"velocity must be tangent (q.v = {float(q @ v):.3e})")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "v", v)


def project_horizontal(xi) -> np.ndarray:
    xi = _vec(xi)
    return np.array([xi[0], xi[1], 0.0])


def project_vertical(xi) -> np.ndarray:
    xi = _vec(xi)
    return np.array([0.0, 0.0, xi[2]])


def _check_horizontal(name, *vecs, tol=HORIZONTAL_TOL):
    for v in vecs:
        if abs(v[2]) > tol:
            raise NotHorizontal(f"{name} expects horizontal input (third component {v[2]:.3e})")


def h_connection(xi, eta) -> np.ndarray:
    """Horizontal connection on horizontal pairs; identically zero on the sphere."""
    xi, eta = _vec(xi), _vec(eta)
    _check_horizontal("h_connection", xi, eta)
    return 0.5 * project_horizontal(_k.cross3(xi, eta))


def q_tilde(xi, eta, sigma) -> np.ndarray:
    """Horizontal curvature-like tensor of the quotient on horizontal inputs."""
    xi, eta, sigma = _vec(xi), _vec(eta), _vec(sigma)
    _check_horizontal("q_tilde", xi, eta, sigma)
    t1 = project_horizontal(_k.cross3(sigma, _k.cross3(xi, eta)))
    t2 = _k.cross3(xi, project_vertical(_k.cross3(eta, sigma)))
    t3 = _k.cross3(eta, project_vertical(_k.cross3(xi, sigma)))
    t4 = _k.cross3(sigma, project_vertical(_k.cross3(xi, eta)))
    return 0.25 * (t1 - t2 + t3 + 2.0 * t4)


def rhs_sphere(obstacles, s: ReducedState, exact_theta: bool = False) -> StateDerivative:
    """Symmetric-space reduced system; slots hold (Omega, Omega', Omega'').

    The obstacle gradient (local or theta-exact mode) is horizontally
    projected so integration preserves horizontality exactly.
    """
    _check_horizontal("rhs_sphere", s.xi, s.eta, s.eta_dot, tol=1e-8)
    return make_system("sphere", obstacles=obstacles, exact_theta=exact_theta)(s)


def theta_fiber(H) -> np.ndarray:
    """Fiber representative of H closest to the identity.

    Scans 64 fiber angles and refines by golden section; raises
    FiberDegenerate when the scan sees two near-minimal angles more than
    0.1 rad apart.
    """
    H = _mat(H)
    alpha, st = _k.theta_alpha_k(H)
    if st != _k.OK:
        raise FiberDegenerate(
            "fiber minimizer is not isolated (projection near the antipode of e3?)"
        )
    return _k.mat3_mul(H, _k.rz3(alpha))


def project_sphere(R) -> SpherePoint:
    """Projection R -> R e3."""
    R = _mat(R)
    return SpherePoint(R @ _E3)


def frame_from_point(q, hint=None) -> np.ndarray:
    """Rotation taking e3 to q along the geodesic arc.

    For q antipodal to e3 the arc is ambiguous; the hint axis (default e1)
    picks the half-turn exp(pi * hint), which must be orthogonal to e3.
    """
    q = SpherePoint(q).q
    c = float(q @ _E3)
    if c <= -1.0 + 1e-9:
        if hint is None:
            raise AntipodalLiftAmbiguity(
                "point is antipodal to e3; pass an axis hint to pick a lift"
            )
        axis = _vec(hint)
        nrm = np.linalg.norm(axis)
        if nrm == 0.0 or abs(axis[2]) / nrm > 1e-9:
            raise AntipodalLiftAmbiguity("lift hint must be a nonzero axis orthogonal to e3")
        return _k.exp_so3_k(math.pi * axis / nrm)
    if c >= 1.0 - 1e-15:
        return np.eye(3)
    axis = _k.cross3(_E3, q)
    axis = axis / np.linalg.norm(axis)
    return _k.exp_so3_k(math.acos(max(-1.0, min(1.0, c))) * axis)


def lift_boundary(b: SphereBoundary, antipode_hint=None) -> tuple[np.ndarray, np.ndarray]:
    """Horizontal lift of sphere boundary data to (rotation, body velocity).

    Returns (R, Omega) with R e3 = q, Omega horizontal and R hat(Omega) e3
    = v. Antipodal q needs a hint unless the default e1 is acceptable.
    """
    if antipode_hint is None and float(b.q @ _E3) <= -1.0 + 1e-9:
        raise AntipodalLiftAmbiguity(
            "boundary point is antipodal to e3; pass antipode_hint to pick the lift"
        )
    R = frame_from_point(b.q, hint=antipode_hint)
    omega = _k.cross3(_E3, _k.mat3_tvec(R, b.v))
    return R, omega
