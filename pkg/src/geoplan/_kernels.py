"""Hot numeric kernels on 3-vectors and 3x3 matrices.

Everything here is written in a numba-compatible subset of numpy (unrolled
scalar arithmetic, preallocated outputs, integer status codes instead of
exceptions) and compiled by the decorator from geoplan._jit. With
GEOPLAN_NO_NUMBA=1 the same source runs as plain Python; the wrappers in the
public modules translate status codes into exceptions either way.
"""

import math

import numpy as np

from ._jit import kernel

# status codes shared with the wrapper layer
OK = 0
ERR_ANTIPODAL = 1
ERR_NONFINITE = 2
ERR_FIBER = 3
ERR_ORTHO = 4

# dynamics families handled by rhs_packed / integrate_fused
MODE_LEFT = 0
MODE_BI = 1
MODE_SPHERE = 2

# tr(R) <= -1 + TR_EPS_ANTIPODE is outside the log map's domain
TR_EPS_ANTIPODE = 1e-8
# below this angle the exp/log trig ratios switch to series
SMALL_ANGLE = 1e-4


@kernel
def cross3(a, b):
    out = np.empty(3)
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]
    return out


@kernel
def dot3(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


@kernel
def mat3_vec(A, v):
    out = np.empty(3)
    out[0] = A[0, 0] * v[0] + A[0, 1] * v[1] + A[0, 2] * v[2]
    out[1] = A[1, 0] * v[0] + A[1, 1] * v[1] + A[1, 2] * v[2]
    out[2] = A[2, 0] * v[0] + A[2, 1] * v[1] + A[2, 2] * v[2]
    return out


@kernel
def mat3_tvec(A, v):
    out = np.empty(3)
    out[0] = A[0, 0] * v[0] + A[1, 0] * v[1] + A[2, 0] * v[2]
    out[1] = A[0, 1] * v[0] + A[1, 1] * v[1] + A[2, 1] * v[2]
    out[2] = A[0, 2] * v[0] + A[1, 2] * v[1] + A[2, 2] * v[2]
    return out


@kernel
def mat3_mul(A, B):
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            out[i, j] = A[i, 0] * B[0, j] + A[i, 1] * B[1, j] + A[i, 2] * B[2, j]
    return out


@kernel
def mat3_tmul(A, B):
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            out[i, j] = A[0, i] * B[0, j] + A[1, i] * B[1, j] + A[2, i] * B[2, j]
    return out


@kernel
def mat3_transpose(A):
    out = np.empty((3, 3))
    for i in range(3):
        for j in range(3):
            out[i, j] = A[j, i]
    return out


@kernel
def det3(A):
    return (
        A[0, 0] * (A[1, 1] * A[2, 2] - A[1, 2] * A[2, 1])
        - A[0, 1] * (A[1, 0] * A[2, 2] - A[1, 2] * A[2, 0])
        + A[0, 2] * (A[1, 0] * A[2, 1] - A[1, 1] * A[2, 0])
    )


@kernel
def hat3(v):
    out = np.zeros((3, 3))
    out[0, 1] = -v[2]
    out[0, 2] = v[1]
    out[1, 0] = v[2]
    out[1, 2] = -v[0]
    out[2, 0] = -v[1]
    out[2, 1] = v[0]
    return out


@kernel
def vee3(M):
    # vee of the skew part of M
    out = np.empty(3)
    out[0] = 0.5 * (M[2, 1] - M[1, 2])
    out[1] = 0.5 * (M[0, 2] - M[2, 0])
    out[2] = 0.5 * (M[1, 0] - M[0, 1])
    return out


@kernel
def skew_defect(M):
    # Frobenius norm of M + M^T
    s = 0.0
    for i in range(3):
        for j in range(3):
            d = M[i, j] + M[j, i]
            s += d * d
    return math.sqrt(s)


@kernel
def orth_defect(M):
    # Frobenius norm of M^T M - I
    G = mat3_tmul(M, M)
    s = 0.0
    for i in range(3):
        for j in range(3):
            d = G[i, j] - (1.0 if i == j else 0.0)
            s += d * d
    return math.sqrt(s)


@kernel
def rot_angle(R):
    c = 0.5 * (R[0, 0] + R[1, 1] + R[2, 2] - 1.0)
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    return math.acos(c)


@kernel
def exp_so3_k(w):
    t2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2]
    t = math.sqrt(t2)
    if t < SMALL_ANGLE:
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0
        b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0
    else:
        a = math.sin(t) / t
        b = (1.0 - math.cos(t)) / t2
    c = 1.0 - b * t2
    out = np.empty((3, 3))
    out[0, 0] = c + b * w[0] * w[0]
    out[0, 1] = b * w[0] * w[1] - a * w[2]
    out[0, 2] = b * w[0] * w[2] + a * w[1]
    out[1, 0] = b * w[0] * w[1] + a * w[2]
    out[1, 1] = c + b * w[1] * w[1]
    out[1, 2] = b * w[1] * w[2] - a * w[0]
    out[2, 0] = b * w[0] * w[2] - a * w[1]
    out[2, 1] = b * w[1] * w[2] + a * w[0]
    out[2, 2] = c + b * w[2] * w[2]
    return out


@kernel
def log_so3_k(R, out):
    tr = R[0, 0] + R[1, 1] + R[2, 2]
    if tr + 1.0 <= TR_EPS_ANTIPODE:
        return ERR_ANTIPODAL
    phi = rot_angle(R)
    if phi < SMALL_ANGLE:
        s = 0.5 * (1.0 + phi * phi / 6.0)
    else:
        s = 0.5 * phi / math.sin(phi)
    out[0] = s * (R[2, 1] - R[1, 2])
    out[1] = s * (R[0, 2] - R[2, 0])
    out[2] = s * (R[1, 0] - R[0, 1])
    return OK


@kernel
def orthonormalize_k(M, out):
    if orth_defect(M) >= 0.5:
        return ERR_ORTHO
    if det3(M) <= 0.0:
        return ERR_ORTHO
    X = M.copy()
    for _ in range(20):
        G = mat3_tmul(X, X)
        G[0, 0] -= 1.0
        G[1, 1] -= 1.0
        G[2, 2] -= 1.0
        s = 0.0
        for i in range(3):
            for j in range(3):
                s += G[i, j] * G[i, j]
        if math.sqrt(s) < 1e-13:
            break
        XG = mat3_mul(X, G)
        for i in range(3):
            for j in range(3):
                X[i, j] = X[i, j] - 0.5 * XG[i, j]
    for i in range(3):
        for j in range(3):
            out[i, j] = X[i, j]
    return OK


@kernel
def ad_dagger_k(Jm, Jinv, xi, eta):
    # Jinv (J eta x xi)
    je0 = Jm[0, 0] * eta[0] + Jm[0, 1] * eta[1] + Jm[0, 2] * eta[2]
    je1 = Jm[1, 0] * eta[0] + Jm[1, 1] * eta[1] + Jm[1, 2] * eta[2]
    je2 = Jm[2, 0] * eta[0] + Jm[2, 1] * eta[1] + Jm[2, 2] * eta[2]
    c0 = je1 * xi[2] - je2 * xi[1]
    c1 = je2 * xi[0] - je0 * xi[2]
    c2 = je0 * xi[1] - je1 * xi[0]
    out = np.empty(3)
    out[0] = Jinv[0, 0] * c0 + Jinv[0, 1] * c1 + Jinv[0, 2] * c2
    out[1] = Jinv[1, 0] * c0 + Jinv[1, 1] * c1 + Jinv[1, 2] * c2
    out[2] = Jinv[2, 0] * c0 + Jinv[2, 1] * c1 + Jinv[2, 2] * c2
    return out


@kernel
def gconn_k(Jm, Jinv, xi, eta):
    # algebra-level connection ([xi,eta] - addag_xi eta - addag_eta xi) / 2,
    # equivalently (xi x eta + Jinv(xi x J eta + eta x J xi)) / 2
    je0 = Jm[0, 0] * eta[0] + Jm[0, 1] * eta[1] + Jm[0, 2] * eta[2]
    je1 = Jm[1, 0] * eta[0] + Jm[1, 1] * eta[1] + Jm[1, 2] * eta[2]
    je2 = Jm[2, 0] * eta[0] + Jm[2, 1] * eta[1] + Jm[2, 2] * eta[2]
    jx0 = Jm[0, 0] * xi[0] + Jm[0, 1] * xi[1] + Jm[0, 2] * xi[2]
    jx1 = Jm[1, 0] * xi[0] + Jm[1, 1] * xi[1] + Jm[1, 2] * xi[2]
    jx2 = Jm[2, 0] * xi[0] + Jm[2, 1] * xi[1] + Jm[2, 2] * xi[2]
    u0 = xi[1] * je2 - xi[2] * je1 + eta[1] * jx2 - eta[2] * jx1
    u1 = xi[2] * je0 - xi[0] * je2 + eta[2] * jx0 - eta[0] * jx2
    u2 = xi[0] * je1 - xi[1] * je0 + eta[0] * jx1 - eta[1] * jx0
    out = np.empty(3)
    out[0] = 0.5 * (
        xi[1] * eta[2] - xi[2] * eta[1] + Jinv[0, 0] * u0 + Jinv[0, 1] * u1 + Jinv[0, 2] * u2
    )
    out[1] = 0.5 * (
        xi[2] * eta[0] - xi[0] * eta[2] + Jinv[1, 0] * u0 + Jinv[1, 1] * u1 + Jinv[1, 2] * u2
    )
    out[2] = 0.5 * (
        xi[0] * eta[1] - xi[1] * eta[0] + Jinv[2, 0] * u0 + Jinv[2, 1] * u1 + Jinv[2, 2] * u2
    )
    return out


@kernel
def curvature_k(Jm, Jinv, eta, xi, sigma):
    t1 = gconn_k(Jm, Jinv, eta, gconn_k(Jm, Jinv, xi, sigma))
    t2 = gconn_k(Jm, Jinv, xi, gconn_k(Jm, Jinv, eta, sigma))
    t3 = gconn_k(Jm, Jinv, cross3(eta, xi), sigma)
    out = np.empty(3)
    out[0] = t1[0] - t2[0] - t3[0]
    out[1] = t1[1] - t2[1] - t3[1]
    out[2] = t1[2] - t2[2] - t3[2]
    return out


@kernel
def potential_value_k(dist, tau, d_scale, n_exp):
    return tau / (1.0 + (dist / d_scale) ** (2.0 * n_exp))


@kernel
def grad_prefactor_k(phi, tau, d_scale, n_exp):
    # scalar factor c(phi) with gradient = -c(phi) * Log(H); smooth at phi=0
    # because phi^(2N-2) -> 1 for N=1 (0^0 == 1) and -> 0 for N >= 2
    two_n = 2.0 * n_exp
    r = (phi / d_scale) ** two_n
    num = two_n * tau * phi ** (two_n - 2.0)
    den = d_scale**two_n * (1.0 + r) ** 2
    return num / den


@kernel
def grad_local_k(H, tau, d_scale, n_exp, out):
    # bi-invariant body-frame gradient of the obstacle potential at relative
    # pose H; this is the term the reduced equations add verbatim
    st = log_so3_k(H, out)
    if st != OK:
        return st
    c = grad_prefactor_k(rot_angle(H), tau, d_scale, n_exp)
    out[0] = -c * out[0]
    out[1] = -c * out[1]
    out[2] = -c * out[2]
    return OK


@kernel
def fiber_phi(a_cos, b_sin, h33, alpha):
    # rotation angle of H Rz(alpha) from the trace sinusoid
    t = a_cos * math.cos(alpha) + b_sin * math.sin(alpha) + h33
    c = 0.5 * (t - 1.0)
    if c > 1.0:
        c = 1.0
    elif c < -1.0:
        c = -1.0
    return math.acos(c)


@kernel
def theta_alpha_k(H):
    # fiber angle minimizing the distance to the identity over H Rz(alpha):
    # 64-point coarse scan then golden-section refinement to 1e-10
    a_cos = H[0, 0] + H[1, 1]
    b_sin = H[0, 1] - H[1, 0]
    h33 = H[2, 2]
    n = 64
    step = 2.0 * math.pi / n
    vals = np.empty(n)
    kbest = 0
    fbest = fiber_phi(a_cos, b_sin, h33, -math.pi)
    vals[0] = fbest
    for k in range(1, n):
        f = fiber_phi(a_cos, b_sin, h33, -math.pi + k * step)
        vals[k] = f
        if f < fbest:
            fbest = f
            kbest = k
    # near-minimal scan points spread over more than 0.1 rad mean the
    # minimizer is not isolated
    for k in range(n):
        if vals[k] <= fbest + 1e-6:
            d = abs(k - kbest) * step
            if d > math.pi:
                d = 2.0 * math.pi - d
            if d > 0.1:
                return 0.0, ERR_FIBER
    lo = -math.pi + kbest * step - step
    hi = -math.pi + kbest * step + step
    invgold = 0.5 * (math.sqrt(5.0) - 1.0)
    c = hi - invgold * (hi - lo)
    d = lo + invgold * (hi - lo)
    fc = fiber_phi(a_cos, b_sin, h33, c)
    fd = fiber_phi(a_cos, b_sin, h33, d)
    while hi - lo > 1e-10:
        if fc < fd:
            hi = d
            d = c
            fd = fc
            c = hi - invgold * (hi - lo)
            fc = fiber_phi(a_cos, b_sin, h33, c)
        else:
            lo = c
            c = d
            fc = fd
            d = lo + invgold * (hi - lo)
            fd = fiber_phi(a_cos, b_sin, h33, d)
    alpha = 0.5 * (lo + hi)
    if alpha < -math.pi:
        alpha += 2.0 * math.pi
    elif alpha >= math.pi:
        alpha -= 2.0 * math.pi
    return alpha, OK


@kernel
def rz3(alpha):
    out = np.zeros((3, 3))
    c = math.cos(alpha)
    s = math.sin(alpha)
    out[0, 0] = c
    out[0, 1] = -s
    out[1, 0] = s
    out[1, 1] = c
    out[2, 2] = 1.0
    return out


@kernel
def sphere_fiber_dist_k(H):
    # quotient distance to the base point: rotation angle at the
    # fiber-optimal representative
    alpha, st = theta_alpha_k(H)
    if st != OK:
        return 0.0, st
    return fiber_phi(H[0, 0] + H[1, 1], H[0, 1] - H[1, 0], H[2, 2], alpha), OK


@kernel
def grad_exact_sphere_k(H, tau, d_scale, n_exp, out):
    # central differences of the theta-composed potential in the three body
    # directions, then horizontal projection
    eps = 1e-6
    w = np.zeros(3)
    for i in range(3):
        w[i] = eps
        dp, st = sphere_fiber_dist_k(mat3_mul(H, exp_so3_k(w)))
        if st != OK:
            return st
        w[i] = -eps
        dm, st = sphere_fiber_dist_k(mat3_mul(H, exp_so3_k(w)))
        if st != OK:
            return st
        w[i] = 0.0
        vp = potential_value_k(dp, tau, d_scale, n_exp)
        vm = potential_value_k(dm, tau, d_scale, n_exp)
        out[i] = (vp - vm) / (2.0 * eps)
    out[2] = 0.0
    return OK


@kernel
def rhs_packed(y, dy, m, n_obs, mode, exact, taus, ds, ns, Jm, Jinv):
    """Reduced-equation right-hand side on the packed state vector.

    Layout: m row-major 3x3 rotation blocks, then xi, eta, eta_dot. All
    dynamics families share the layout; for the third-order families the
    (eta, eta_dot) slots hold (xi_dot, xi_ddot).
    """
    base = 9 * m
    xi = y[base : base + 3]
    eta = y[base + 3 : base + 6]
    etad = y[base + 6 : base + 9]

    W = hat3(xi)
    for b in range(m):
        Hb = y[9 * b : 9 * b + 9].reshape((3, 3))
        dHb = mat3_mul(Hb, W)
        for i in range(3):
            for j in range(3):
                dy[9 * b + 3 * i + j] = dHb[i, j]

    gvec = np.zeros(3)
    if n_obs > 0:
        gtmp = np.empty(3)
        for i in range(n_obs):
            if taus[i] > 0.0:
                Hi = y[9 * i : 9 * i + 9].reshape((3, 3))
                if mode == MODE_SPHERE and exact == 1:
                    st = grad_exact_sphere_k(Hi, taus[i], ds[i], ns[i], gtmp)
                else:
                    st = grad_local_k(Hi, taus[i], ds[i], ns[i], gtmp)
                if st != OK:
                    return st
                gvec[0] += gtmp[0]
                gvec[1] += gtmp[1]
                gvec[2] += gtmp[2]

    if mode == MODE_LEFT:
        # left-invariant metric: gradient enters through the inertia inverse
        gvec = mat3_vec(Jinv, gvec)
        adxx = ad_dagger_k(Jm, Jinv, xi, xi)
        t = np.empty(3)
        t1 = gconn_k(Jm, Jinv, xi, etad)
        t2 = gconn_k(Jm, Jinv, eta, eta)
        t3 = gconn_k(Jm, Jinv, adxx, eta)
        t4 = gconn_k(Jm, Jinv, xi, gconn_k(Jm, Jinv, xi, eta))
        t5 = curvature_k(Jm, Jinv, eta, xi, xi)
        for i in range(3):
            t[i] = 2.0 * t1[i] + t2[i] + t3[i] + t4[i] + t5[i] + gvec[i]
            dy[base + i] = eta[i] + adxx[i]
            dy[base + 3 + i] = etad[i]
            dy[base + 6 + i] = -t[i]
    elif mode == MODE_BI:
        br = cross3(xi, etad)
        for i in range(3):
            dy[base + i] = eta[i]
            dy[base + 3 + i] = etad[i]
            dy[base + 6 + i] = -br[i] - gvec[i]
    else:
        # symmetric-space system; the gradient is horizontally projected
        gvec[2] = 0.0
        br = cross3(xi, cross3(eta, xi))
        for i in range(3):
            dy[base + i] = eta[i]
            dy[base + 3 + i] = etad[i]
            dy[base + 6 + i] = -br[i] - gvec[i]
    return OK


@kernel
def integrate_fused(
    y0, m, n_obs, mode, exact, taus, ds, ns, Jm, Jinv, t0, dt, n_steps, rec_every, out_y, out_t
):
    """Fixed-step RK4 over the packed state with per-step reprojection.

    Records the state every rec_every steps plus both endpoints into out_y /
    out_t (preallocated by the caller). Returns (status, t_fail, n_written).
    """
    n = y0.shape[0]
    y = y0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    yt = np.empty(n)
    Htmp = np.empty((3, 3))

    out_y[0, :] = y
    out_t[0] = t0
    nw = 1
    for step in range(n_steps):
        t = t0 + step * dt
        st = rhs_packed(y, k1, m, n_obs, mode, exact, taus, ds, ns, Jm, Jinv)
        if st != OK:
            return st, t, nw
        half = 0.5 * dt
        for i in range(n):
            yt[i] = y[i] + half * k1[i]
        st = rhs_packed(yt, k2, m, n_obs, mode, exact, taus, ds, ns, Jm, Jinv)
        if st != OK:
            return st, t, nw
        for i in range(n):
            yt[i] = y[i] + half * k2[i]
        st = rhs_packed(yt, k3, m, n_obs, mode, exact, taus, ds, ns, Jm, Jinv)
        if st != OK:
            return st, t, nw
        for i in range(n):
            yt[i] = y[i] + dt * k3[i]
        st = rhs_packed(yt, k4, m, n_obs, mode, exact, taus, ds, ns, Jm, Jinv)
        if st != OK:
            return st, t, nw
        c = dt / 6.0
        for i in range(n):
            y[i] = y[i] + c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        for b in range(m):
            Hb = y[9 * b : 9 * b + 9].reshape((3, 3))
            st = orthonormalize_k(Hb, Htmp)
            if st != OK:
                return st, t + dt, nw
            for i in range(3):
                for j in range(3):
                    y[9 * b + 3 * i + j] = Htmp[i, j]
        for i in range(n):
            if not math.isfinite(y[i]):
                return ERR_NONFINITE, t + dt, nw
        if (step + 1) % rec_every == 0 or step + 1 == n_steps:
            out_y[nw, :] = y
            out_t[nw] = t0 + (step + 1) * dt
            nw += 1
    return OK, t0 + n_steps * dt, nw
