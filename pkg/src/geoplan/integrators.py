"""Fixed-step RK4 integration with per-step group reprojection.

The generic path works with any rhs callable mapping ReducedState to
StateDerivative, treating rotation blocks as 9 flat reals and reprojecting
them after each full step. When the rhs is a ReducedSystem the whole loop
runs inside the fused kernel instead; both paths evaluate the same kernels
in the same order.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as _k
from .algebra import orthonormalize
from .dynamics import ReducedState, ReducedSystem, pack_state, unpack_state
from .errors import (
    AntipodalSingularity,
    FiberDegenerate,
    GeoplanError,
    NonFiniteState,
    TooFarFromGroup,
)

__all__ = ["TrajectorySample", "rk4_step", "integrate"]


@dataclass
class TrajectorySample:
    """Time-stamped output record of one integration step."""

    t: float
    h: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    eta_dot: np.ndarray
    q: np.ndarray | None = None
    dist: float = 0.0
    v_pot: float = 0.0
    obstacle_dists: tuple = field(default=(), repr=False)


def _shift(s: ReducedState, k, c: float) -> ReducedState:
    out = ReducedState.__new__(ReducedState)
    out.h = s.h + c * k.dh
    out.xi = s.xi + c * k.dxi
    out.eta = s.eta + c * k.deta
    out.eta_dot = s.eta_dot + c * k.deta_dot
    out.extra_h = tuple(x + c * dx for x, dx in zip(s.extra_h, k.extra_dh))
    return out


def rk4_step(rhs, s: ReducedState, dt: float) -> ReducedState:
    """One classical RK4 step; rotation slots are reprojected afterwards."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    k1 = rhs(s)
    k2 = rhs(_shift(s, k1, 0.5 * dt))
    k3 = rhs(_shift(s, k2, 0.5 * dt))
    k4 = rhs(_shift(s, k3, dt))
    c = dt / 6.0
    h = s.h + c * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh)
    xi = s.xi + c * (k1.dxi + 2.0 * k2.dxi + 2.0 * k3.dxi + k4.dxi)
    eta = s.eta + c * (k1.deta + 2.0 * k2.deta + 2.0 * k3.deta + k4.deta)
    eta_dot = s.eta_dot + c * (
        k1.deta_dot + 2.0 * k2.deta_dot + 2.0 * k3.deta_dot + k4.deta_dot
    )
    extra = tuple(
        x
        + c
        * (
            k1.extra_dh[i]
            + 2.0 * k2.extra_dh[i]
            + 2.0 * k3.extra_dh[i]
            + k4.extra_dh[i]
        )
        for i, x in enumerate(s.extra_h)
    )
    h = orthonormalize(h)
    extra = tuple(orthonormalize(x) for x in extra)
    out = ReducedState.__new__(ReducedState)
    out.h = h
    out.xi = xi
    out.eta = eta
    out.eta_dot = eta_dot
    out.extra_h = extra
    for arr in (out.h, out.xi, out.eta, out.eta_dot, *out.extra_h):
        if not np.all(np.isfinite(arr)):
            raise NonFiniteState("integration step produced non-finite state")
    return out


def _decorate(t: float, s: ReducedState, system: ReducedSystem | None) -> TrajectorySample:
    dist = _k.rot_angle(s.h)
    q = None
    v_pot = 0.0
    obstacle_dists = ()
    if system is not None:
        if system.n_obs > 0:
            blocks = (s.h,) + s.extra_h
            dists = []
            for ob, hb in zip(system.obstacles, blocks):
                if system.family == "sphere" and system.exact:
                    d, st = _k.sphere_fiber_dist_k(hb)
                    if st != _k.OK:
                        d = _k.rot_angle(hb)
                else:
                    d = _k.rot_angle(hb)
                dists.append(float(d))
                v_pot += float(_k.potential_value_k(d, ob.tau, ob.d_scale, float(ob.n_exp)))
            obstacle_dists = tuple(dists)
        if system.family == "sphere":
            g = system.primary_frame @ s.h
            q = g @ np.array([0.0, 0.0, 1.0])
    return TrajectorySample(
        t=float(t),
        h=s.h.copy(),
        xi=s.xi.copy(),
        eta=s.eta.copy(),
        eta_dot=s.eta_dot.copy(),
        q=q,
        dist=float(dist),
        v_pot=float(v_pot),
        obstacle_dists=obstacle_dists,
    )


def _raise_integration_error(st: int, t: float):
    msg = f"at t = {t:.9g}"
    if st == _k.ERR_ANTIPODAL:
        raise AntipodalSingularity(f"gradient singularity tr(H) = -1 {msg}")
    if st == _k.ERR_NONFINITE:
        raise NonFiniteState(f"non-finite state {msg}")
    if st == _k.ERR_FIBER:
        raise FiberDegenerate(f"fiber minimizer not isolated {msg}")
    if st == _k.ERR_ORTHO:
        raise TooFarFromGroup(f"rotation block left the reprojection trust region {msg}")
    raise RuntimeError(f"kernel status {st} {msg}")


def integrate(rhs, s0: ReducedState, t_span, n_steps: int, record_every: int = 1):
    """Integrate with n_steps uniform RK4 steps over t_span = (a, b).

    Samples are recorded every record_every steps plus both endpoints.
    Returns a list of TrajectorySample.
    """
    a, b = float(t_span[0]), float(t_span[1])
    if not b > a:
        raise ValueError("t_span must satisfy b > a")
    n_steps = int(n_steps)
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    record_every = int(record_every)
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    dt = (b - a) / n_steps

    if isinstance(rhs, ReducedSystem):
        system = rhs
        m = system.m
        y0 = pack_state(s0, m)
        n_rec = n_steps // record_every + 1 + (1 if n_steps % record_every else 0)
        out_y = np.empty((n_rec, y0.shape[0]))
        out_t = np.empty(n_rec)
        m_, n_obs, mode, exact, taus, ds, ns, jm, jinv = system.kernel_args()
        st, t_fail, nw = _k.integrate_fused(
            y0, m_, n_obs, mode, exact, taus, ds, ns, jm, jinv,
            a, dt, n_steps, record_every, out_y, out_t,
        )
        if st != _k.OK:
            _raise_integration_error(st, t_fail)
        return [
            _decorate(out_t[i], unpack_state(out_y[i], m), system) for i in range(nw)
        ]

    samples = [_decorate(a, s0, None)]
    s = s0
    for step in range(n_steps):
        t = a + step * dt
        try:
            s = rk4_step(rhs, s, dt)
        except GeoplanError as exc:
            raise type(exc)(f"{exc} [t = {t:.9g}]") from exc
        if (step + 1) % record_every == 0 or step + 1 == n_steps:
            samples.append(_decorate(a + (step + 1) * dt, s, None))
    return samples
