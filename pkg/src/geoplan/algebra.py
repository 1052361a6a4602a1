"""Exact small-matrix kernel for SO(3) and its Lie algebra.

Algebra elements are plain length-3 float arrays under the hat isomorphism;
rotations are 3x3 arrays. All functions are pure and thread-safe.
"""

import numpy as np

from . import _kernels as _k
from .errors import AntipodalSingularity, NonSkewInput, TooFarFromGroup

__all__ = [
    "hat",
    "vee",
    "exp_so3",
    "log_so3",
    "rotation_angle",
    "orthonormalize",
    "assert_rotation",
    "is_rotation",
]

ROTATION_TOL = 1e-9


def _vec(v) -> np.ndarray:
    return np.ascontiguousarray(v, dtype=np.float64).reshape(3)


def _mat(M) -> np.ndarray:
    return np.ascontiguousarray(M, dtype=np.float64).reshape(3, 3)


def hat(v) -> np.ndarray:
    """Skew matrix of a 3-vector: hat(v) @ w == cross(v, w)."""
    return _k.hat3(_vec(v))


def vee(M) -> np.ndarray:
    """Inverse of hat on skew matrices (skew-projects first).

    Raises NonSkewInput when the symmetric part is larger than 1e-6 in
    Frobenius norm.
    """
    M = _mat(M)
    if _k.skew_defect(M) > 1e-6:
        raise NonSkewInput(f"matrix is not skew-symmetric (defect {_k.skew_defect(M):.3e})")
    return _k.vee3(M)


def exp_so3(w) -> np.ndarray:
    """Rodrigues exponential of an algebra vector."""
    return _k.exp_so3_k(_vec(w))


def log_so3(R) -> np.ndarray:
    """Logarithm of a rotation as an algebra vector with norm = rotation angle.

    Raises AntipodalSingularity on the tr(R) = -1 domain boundary.
    """
    R = _mat(R)
    out = np.empty(3)
    if _k.log_so3_k(R, out) != _k.OK:
        raise AntipodalSingularity(
            f"log undefined near tr(R) = -1 (tr = {np.trace(R):.12f})"
        )
    return out


def rotation_angle(R) -> float:
    """Angle of rotation in [0, pi]; arccos argument is clamped."""
    return _k.rot_angle(_mat(R))


def orthonormalize(M) -> np.ndarray:
    """Project a near-rotation back onto SO(3) by iterative polar correction.

    Exact rotations pass through unchanged. Raises TooFarFromGroup when
    ||M^T M - I||_F >= 0.5 or det(M) <= 0.
    """
    M = _mat(M)
    out = np.empty((3, 3))
    if _k.orthonormalize_k(M, out) != _k.OK:
        raise TooFarFromGroup(
            f"matrix too far from SO(3) (defect {_k.orth_defect(M):.3e}, det {_k.det3(M):.3e})"
        )
    return out


def is_rotation(M, tol: float = ROTATION_TOL) -> bool:
    M = _mat(M)
    return bool(_k.orth_defect(M) <= tol and abs(_k.det3(M) - 1.0) <= tol)


def assert_rotation(M, name: str = "matrix", tol: float = ROTATION_TOL) -> np.ndarray:
    """Validate the rotation invariants; returns the coerced array."""
    M = _mat(M)
    if not is_rotation(M, tol):
        raise ValueError(
            f"{name} is not a rotation: orthogonality defect "
            f"{_k.orth_defect(M):.3e}, det {_k.det3(M):.6f}"
        )
    return M
