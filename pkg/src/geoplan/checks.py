"""Built-in identity and property suite behind the `geoplan check` command.

Each check exercises one of the structural identities the planner relies on
(connection lemmas, gradient consistency, curvature of the sphere, ...).
All draws are seeded, so the table is reproducible.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as _k
from .algebra import exp_so3, hat, log_so3, rotation_angle, vee
from .dynamics import ReducedState, rhs_bi_invariant, rhs_left_invariant
from .integrators import integrate
from .metric import InertiaTensor, ad_dagger, curvature, g_connection, inner_bi, inner_left
from .potential import MetricMode, ObstacleSpec, potential_value, reduced_gradient
from .sphere import q_tilde, theta_fiber
from .dynamics import make_system

__all__ = ["CheckResult", "run_checks"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _rand_vec(rng, scale=1.0):
    return rng.uniform(-scale, scale, 3)


def _rand_spd(rng):
    a = rng.uniform(-1.0, 1.0, (3, 3))
    return InertiaTensor.from_matrix(a.T @ a + 0.1 * np.eye(3))


def _rand_rotation(rng, max_angle=math.pi - 0.1):
    v = rng.normal(size=3)
    v /= np.linalg.norm(v)
    return exp_so3(v * rng.uniform(0.0, max_angle))


def _result(name, err, tol):
    return CheckResult(name, err <= tol, f"max residual {err:.3e} (tol {tol:.0e})")


def check_exp_log_roundtrip(n=2000, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        v = rng.normal(size=3)
        v *= rng.uniform(0.0, math.pi - 0.1) / np.linalg.norm(v)
        worst = max(worst, float(np.max(np.abs(log_so3(exp_so3(v)) - v))))
    return _result("exp/log roundtrip", worst, 1e-9)


def check_hat_vee(n=500, seed=1):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        v = _rand_vec(rng)
        worst = max(worst, float(np.max(np.abs(vee(hat(v)) - v))))
        w = _rand_vec(rng)
        worst = max(worst, float(np.max(np.abs(hat(v) @ w - np.cross(v, w)))))
    return _result("hat/vee and cross identities", worst, 1e-15)


def check_torsion(n=500, seed=2):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        J = _rand_spd(rng)
        xi, eta = _rand_vec(rng), _rand_vec(rng)
        lhs = g_connection(J, xi, eta) - g_connection(J, eta, xi)
        worst = max(worst, float(np.max(np.abs(lhs - np.cross(xi, eta)))))
    return _result("connection torsion identity", worst, 1e-13)


def check_metric_compatibility(n=500, seed=3):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        J = _rand_spd(rng)
        xi, eta, sigma = (_rand_vec(rng) for _ in range(3))
        s = inner_left(J, g_connection(J, sigma, xi), eta) + inner_left(
            J, xi, g_connection(J, sigma, eta)
        )
        worst = max(worst, abs(s))
    return _result("connection metric compatibility", worst, 1e-12)


def check_ad_dagger_adjoint(n=500, seed=4):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        J = _rand_spd(rng)
        xi, eta, sigma = (_rand_vec(rng) for _ in range(3))
        lhs = inner_left(J, ad_dagger(J, xi, eta), sigma)
        rhs = inner_left(J, eta, np.cross(xi, sigma))
        worst = max(worst, abs(lhs - rhs))
    return _result("ad-dagger adjointness", worst, 1e-12)


def check_bi_invariant_forms(n=500, seed=5):
    rng = np.random.default_rng(seed)
    J = InertiaTensor.identity()
    worst = 0.0
    for _ in range(n):
        xi, eta, sigma = (_rand_vec(rng) for _ in range(3))
        worst = max(
            worst,
            float(np.max(np.abs(g_connection(J, xi, eta) - 0.5 * np.cross(xi, eta)))),
        )
        closed = -0.25 * np.cross(np.cross(eta, xi), sigma)
        worst = max(worst, float(np.max(np.abs(curvature(J, eta, xi, sigma) - closed))))
    return _result("bi-invariant closed forms", worst, 1e-13)


def check_rhs_degeneration(n=300, seed=6):
    rng = np.random.default_rng(seed)
    J = InertiaTensor.identity()
    ob = ObstacleSpec(tau=5.0, d_scale=0.3, n_exp=2)
    worst = 0.0
    for _ in range(n):
        s = ReducedState(
            h=_rand_rotation(rng, 2.5),
            xi=_rand_vec(rng),
            eta=_rand_vec(rng),
            eta_dot=_rand_vec(rng),
        )
        a = rhs_left_invariant(J, ob, s)
        b = rhs_bi_invariant(ob, s)
        for x, y in ((a.dxi, b.dxi), (a.deta, b.deta), (a.deta_dot, b.deta_dot), (a.dh, b.dh)):
            worst = max(worst, float(np.max(np.abs(x - y))))
    return _result("bi-invariant degeneration of the reduced system", worst, 1e-12)


def check_gradient_fd(n=100, seed=7):
    rng = np.random.default_rng(seed)
    J = InertiaTensor.from_diagonal((1.0, 2.0, 3.0))
    worst = 0.0
    eps = 1e-6
    for _ in range(n):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        H = exp_so3(axis * rng.uniform(0.1, 2.8))
        w = rng.normal(size=3)
        w /= np.linalg.norm(w)
        for mode in MetricMode:
            ob = ObstacleSpec(
                tau=rng.uniform(1.0, 60.0),
                d_scale=rng.uniform(0.1, 0.5),
                n_exp=int(rng.integers(1, 4)),
                metric_mode=mode,
            )
            vp = potential_value(ob, H @ exp_so3(eps * w))
            vm = potential_value(ob, H @ exp_so3(-eps * w))
            fd = (vp - vm) / (2.0 * eps)
            grad = reduced_gradient(ob, H, J)
            if mode is MetricMode.BI_INVARIANT:
                pred = inner_bi(grad, w)
            else:
                pred = inner_left(J, grad, w)
            scale = max(1.0, abs(fd))
            worst = max(worst, abs(fd - pred) / scale)
    return _result("potential gradient vs finite differences", worst, 1e-5)


def check_sphere_curvature(n=500, seed=8):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        x = np.array([rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0])
        y = np.array([rng.uniform(-1, 1), rng.uniform(-1, 1), 0.0])
        lhs = inner_bi(q_tilde(x, y, y), x)
        rhs = inner_bi(x, x) * inner_bi(y, y) - inner_bi(x, y) ** 2
        worst = max(worst, abs(lhs - rhs))
    return _result("unit sectional curvature of the sphere", worst, 1e-12)


def check_theta_fiber(n=200, seed=9):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        H = _rand_rotation(rng)
        if H[2, 2] < -0.95:
            continue
        got = rotation_angle(theta_fiber(H))
        expected = math.acos(max(-1.0, min(1.0, H[2, 2])))
        worst = max(worst, abs(got - expected))
    return _result("fiber-optimal representative vs closed form", worst, 1e-9)


def check_rk4_order():
    J = InertiaTensor.from_diagonal((1.0, 2.0, 3.0))
    system = make_system("left_invariant", J=J)
    s0 = ReducedState(h=np.eye(3), xi=(0.7, -0.4, 0.5), eta=(0, 0, 0), eta_dot=(0, 0, 0))

    def endpoint(n):
        return integrate(system, s0, (0.0, 1.0), n, record_every=n)[-1]

    ref = endpoint(6400)
    errs = []
    for n in (100, 200, 400):
        e = endpoint(n)
        errs.append(
            max(
                float(np.max(np.abs(e.h - ref.h))),
                float(np.max(np.abs(e.xi - ref.xi))),
            )
        )
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    ok = all(3.7 <= o <= 4.3 for o in orders)
    return CheckResult(
        "rk4 convergence order", ok, "orders " + ", ".join(f"{o:.2f}" for o in orders)
    )


def run_checks() -> list:
    return [
        check_exp_log_roundtrip(),
        check_hat_vee(),
        check_torsion(),
        check_metric_compatibility(),
        check_ad_dagger_adjoint(),
        check_bi_invariant_forms(),
        check_rhs_degeneration(),
        check_gradient_fd(),
        check_sphere_curvature(),
        check_theta_fiber(),
        check_rk4_order(),
    ]
