import math
from pathlib import Path

import numpy as np
import pytest

import geoplan as gp

SCENARIO_DIR = Path(__file__).resolve().parents[1] / "scenarios"


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture(scope="session")
def scenario_dir():
    return SCENARIO_DIR


def rand_vec(rng, scale=1.0):
    return rng.uniform(-scale, scale, 3)


def rand_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def rand_rotation(rng, max_angle=math.pi - 0.1):
    return gp.exp_so3(rand_unit(rng) * rng.uniform(0.0, max_angle))


def rand_spd(rng):
    a = rng.uniform(-1.0, 1.0, (3, 3))
    return gp.InertiaTensor.from_matrix(a.T @ a + 0.1 * np.eye(3))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # first call of each jitted kernel pays compilation (or cache load);
    # do it once so timed tests measure compute only
    J = gp.InertiaTensor.from_diagonal((1.0, 2.0, 3.0))
    ob = gp.ObstacleSpec(tau=1.0, d_scale=0.2, n_exp=2, pose=np.eye(3))
    s0 = gp.ReducedState(h=np.eye(3), xi=[0.1, 0.2, 0.3], eta=[0, 0, 0], eta_dot=[0, 0, 0])
    obm = gp.ObstacleSpec(
        tau=1.0, d_scale=0.2, n_exp=2, metric_mode=gp.MetricMode.LEFT_WITH_BI_DISTANCE, pose=np.eye(3)
    )
    gp.integrate(gp.make_system("mixed", J=J, obstacles=(obm,)), s0, (0, 0.1), 5)
    gp.integrate(gp.make_system("bi_invariant", obstacles=(ob,)), s0, (0, 0.1), 5)
    sob = gp.ObstacleSpec(tau=1.0, d_scale=0.2, n_exp=2, point=(0.0, 0.0, 1.0))
    sph = gp.ReducedState(h=gp.exp_so3([0.3, 0, 0]), xi=[0.1, 0.2, 0], eta=[0, 0, 0], eta_dot=[0, 0, 0])
    gp.integrate(gp.make_system("sphere", obstacles=(sob,)), sph, (0, 0.1), 5)
    gp.integrate(gp.make_system("sphere", obstacles=(sob,), exact_theta=True), sph, (0, 0.1), 5)
    gp.theta_fiber(gp.exp_so3([0.4, 0, 0]))
    gp.log_so3(gp.exp_so3([0.1, 0.2, 0.3]))
    gp.orthonormalize(np.eye(3))
