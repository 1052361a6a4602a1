"""Left- and bi-invariant metrics on the algebra, the connection and curvature.

The left-invariant metric is parameterized directly by the inertia tensor;
the connection is the algebra-level form ([xi,eta] - addag_xi eta -
addag_eta xi)/2 and the curvature is composed from it, so the bi-invariant
closed forms serve as independent test oracles rather than code paths.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as _k
from .algebra import _mat, _vec

__all__ = [
    "InertiaTensor",
    "inner_left",
    "inner_bi",
    "ad_dagger",
    "g_connection",
    "curvature",
    "beta",
]


@dataclass(frozen=True)
class InertiaTensor:
    """Symmetric positive-definite inertia matrix with its cached inverse."""

    j: np.ndarray
    j_inv: np.ndarray = field(repr=False)

    @classmethod
    def from_matrix(cls, m) -> "InertiaTensor":
        m = _mat(m)
        if np.linalg.norm(m - m.T, "fro") > 1e-12:
            raise ValueError("inertia tensor must be symmetric (defect > 1e-12)")
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError as exc:
            raise ValueError("inertia tensor must be positive-definite") from exc
        inv = np.linalg.inv(m)
        if np.linalg.norm(m @ inv - np.eye(3), "fro") > 1e-10:
            raise ValueError("inertia tensor is too ill-conditioned to invert reliably")
        m.flags.writeable = False
        inv.flags.writeable = False
        return cls(j=m, j_inv=inv)

    @classmethod
    def from_diagonal(cls, d) -> "InertiaTensor":
        return cls.from_matrix(np.diag(np.asarray(d, dtype=np.float64)))

    @classmethod
    def identity(cls) -> "InertiaTensor":
        return cls.from_matrix(np.eye(3))


def inner_left(J: InertiaTensor, xi, eta) -> float:
    """Left-invariant inner product xi^T J eta on the algebra."""
    return float(_k.dot3(_vec(xi), _k.mat3_vec(J.j, _vec(eta))))


def inner_bi(xi, eta) -> float:
    """Bi-invariant (Euclidean) inner product on the algebra."""
    return float(_k.dot3(_vec(xi), _vec(eta)))


def ad_dagger(J: InertiaTensor, xi, eta) -> np.ndarray:
    """Metric adjoint of the adjoint action: Jinv (J eta x xi)."""
    return _k.ad_dagger_k(J.j, J.j_inv, _vec(xi), _vec(eta))


def g_connection(J: InertiaTensor, xi, eta) -> np.ndarray:
    """Algebra-level Levi-Civita connection of the left-invariant metric."""
    return _k.gconn_k(J.j, J.j_inv, _vec(xi), _vec(eta))


def curvature(J: InertiaTensor, eta, xi, sigma) -> np.ndarray:
    """Curvature R(eta, xi) sigma composed from the connection."""
    return _k.curvature_k(J.j, J.j_inv, _vec(eta), _vec(xi), _vec(sigma))


def beta(J: InertiaTensor, xi) -> np.ndarray:
    """Metric-compatibility map: <xi, eta>_bi == <beta(xi), eta>_left."""
    return _k.mat3_vec(J.j_inv, _vec(xi))
