"""Numeric inner loops.

Each kernel exists twice: a ``*_numba`` version compiled with numba and a
``*_numpy`` version that runs without compilation (vectorized numpy where the
loop is data-parallel, a plain Python loop for time stepping, which cannot be
vectorized).  The unsuffixed names dispatch on :data:`nonrecip._accel.USE_NUMBA`.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from ._accel import HAVE_NUMBA, USE_NUMBA, njit, prange

__all__ = [
    "transmission_grid",
    "nonreciprocity_objective",
    "rk4_linear",
    "rk4_full",
]


# ---------------------------------------------------------------------------
# closed-form transmission over a detuning grid


def transmission_grid_numpy(G, theta, J, kappa, gamma, xs):
    xs = np.asarray(xs, dtype=np.float64)
    gx = gamma - 2j * xs
    kx = kappa - 2j * xs
    G2 = G * G
    D = 8.0 * G2 * kx + (4.0 * J * J + kx * kx) * gx + 16j * G2 * J * math.cos(theta)
    w = 1j * J * gx
    t_lr = 4.0 * kappa * (2.0 * G2 * cmath.exp(1j * theta) - w) / D
    t_rl = 4.0 * kappa * (2.0 * G2 * cmath.exp(-1j * theta) - w) / D
    return t_lr, t_rl, np.abs(D)


def _transmission_grid_loop(G, theta, J, kappa, gamma, xs):
    n = xs.shape[0]
    t_lr = np.empty(n, dtype=np.complex128)
    t_rl = np.empty(n, dtype=np.complex128)
    absd = np.empty(n, dtype=np.float64)
    G2 = G * G
    ep = cmath.exp(1j * theta)
    em = cmath.exp(-1j * theta)
    cross = 16j * G2 * J * math.cos(theta)
    for k in prange(n):
        gx = gamma - 2j * xs[k]
        kx = kappa - 2j * xs[k]
        D = 8.0 * G2 * kx + (4.0 * J * J + kx * kx) * gx + cross
        w = 1j * J * gx
        t_lr[k] = 4.0 * kappa * (2.0 * G2 * ep - w) / D
        t_rl[k] = 4.0 * kappa * (2.0 * G2 * em - w) / D
        absd[k] = abs(D)
    return t_lr, t_rl, absd


# ---------------------------------------------------------------------------
# brute-force objective for perfect nonreciprocity


def nonreciprocity_objective_numpy(Js, Gs, xs, kappa, gamma, theta, pass_lr):
    J = np.asarray(Js, dtype=np.float64)[:, None, None]
    G = np.asarray(Gs, dtype=np.float64)[None, :, None]
    x = np.asarray(xs, dtype=np.float64)[None, None, :]
    gx = gamma - 2j * x
    kx = kappa - 2j * x
    G2 = G * G
    D = 8.0 * G2 * kx + (4.0 * J * J + kx * kx) * gx + 16j * G2 * J * math.cos(theta)
    w = 1j * J * gx
    T_lr = np.abs(4.0 * kappa * (2.0 * G2 * cmath.exp(1j * theta) - w) / D)
    T_rl = np.abs(4.0 * kappa * (2.0 * G2 * cmath.exp(-1j * theta) - w) / D)
    if pass_lr:
        return T_rl + (1.0 - T_lr)
    return T_lr + (1.0 - T_rl)


def _nonreciprocity_objective_loop(Js, Gs, xs, kappa, gamma, theta, pass_lr):
    nj, ng, nx = Js.shape[0], Gs.shape[0], xs.shape[0]
    out = np.empty((nj, ng, nx), dtype=np.float64)
    ep = cmath.exp(1j * theta)
    em = cmath.exp(-1j * theta)
    ct = math.cos(theta)
    for a in prange(nj):
        J = Js[a]
        for b in range(ng):
            G2 = Gs[b] * Gs[b]
            for c in range(nx):
                gx = gamma - 2j * xs[c]
                kx = kappa - 2j * xs[c]
                D = 8.0 * G2 * kx + (4.0 * J * J + kx * kx) * gx + 16j * G2 * J * ct
                w = 1j * J * gx
                T_lr = abs(4.0 * kappa * (2.0 * G2 * ep - w) / D)
                T_rl = abs(4.0 * kappa * (2.0 * G2 * em - w) / D)
                if pass_lr:
                    out[a, b, c] = T_rl + (1.0 - T_lr)
                else:
                    out[a, b, c] = T_lr + (1.0 - T_rl)
    return out


# ---------------------------------------------------------------------------
# RK4 for dy/dt = M y + f exp(-i x t), y(0) = 0, three complex components


def _rk4_linear_impl(M, f, x, dt, n_steps, stride):
    m00, m01, m02 = M[0][0], M[0][1], M[0][2]
    m10, m11, m12 = M[1][0], M[1][1], M[1][2]
    m20, m21, m22 = M[2][0], M[2][1], M[2][2]
    f0, f1, f2 = f[0], f[1], f[2]
    n_out = n_steps // stride + 1
    out = np.zeros((n_out, 3), dtype=np.complex128)
    y0, y1, y2 = 0j, 0j, 0j
    half = 0.5 * dt
    for n in range(n_steps):
        t = n * dt
        e_a = cmath.exp(-1j * x * t)
        e_b = cmath.exp(-1j * x * (t + half))
        e_c = cmath.exp(-1j * x * (t + dt))

        k10 = m00 * y0 + m01 * y1 + m02 * y2 + f0 * e_a
        k11 = m10 * y0 + m11 * y1 + m12 * y2 + f1 * e_a
        k12 = m20 * y0 + m21 * y1 + m22 * y2 + f2 * e_a

        z0, z1, z2 = y0 + half * k10, y1 + half * k11, y2 + half * k12
        k20 = m00 * z0 + m01 * z1 + m02 * z2 + f0 * e_b
        k21 = m10 * z0 + m11 * z1 + m12 * z2 + f1 * e_b
        k22 = m20 * z0 + m21 * z1 + m22 * z2 + f2 * e_b

        z0, z1, z2 = y0 + half * k20, y1 + half * k21, y2 + half * k22
        k30 = m00 * z0 + m01 * z1 + m02 * z2 + f0 * e_b
        k31 = m10 * z0 + m11 * z1 + m12 * z2 + f1 * e_b
        k32 = m20 * z0 + m21 * z1 + m22 * z2 + f2 * e_b

        z0, z1, z2 = y0 + dt * k30, y1 + dt * k31, y2 + dt * k32
        k40 = m00 * z0 + m01 * z1 + m02 * z2 + f0 * e_c
        k41 = m10 * z0 + m11 * z1 + m12 * z2 + f1 * e_c
        k42 = m20 * z0 + m21 * z1 + m22 * z2 + f2 * e_c

        s = dt / 6.0
        y0 = y0 + s * (k10 + 2.0 * k20 + 2.0 * k30 + k40)
        y1 = y1 + s * (k11 + 2.0 * k21 + 2.0 * k31 + k41)
        y2 = y2 + s * (k12 + 2.0 * k22 + 2.0 * k32 + k42)
        if (n + 1) % stride == 0:
            j = (n + 1) // stride
            out[j, 0] = y0
            out[j, 1] = y1
            out[j, 2] = y2
    return out


def rk4_linear_numpy(M, f, x, dt, n_steps, stride):
    # nested Python lists index far faster than numpy scalars in the loop
    M = np.asarray(M, dtype=np.complex128).tolist()
    f = np.asarray(f, dtype=np.complex128).tolist()
    return _rk4_linear_impl(M, f, float(x), float(dt), int(n_steps), int(stride))


# ---------------------------------------------------------------------------
# RK4 for the linearized equations with counter-rotating terms retained
#
# Interaction picture rotating c1, c2, b at delta1, delta2, omega_m.  K1 and K2
# are the complex couplings g0 c1_s and g0 c2_s; probe detuning from the
# coupling fields is `delta`.


def _rk4_full_impl(kappa1, kappa2, gamma, omega_m, delta1, delta2, K1, K2, J,
                   eps_l, eps_r, delta, dt, n_steps, stride):
    K1c = K1.conjugate()
    K2c = K2.conjugate()
    hk1 = 0.5 * kappa1
    hk2 = 0.5 * kappa2
    hg = 0.5 * gamma
    w_sum1 = omega_m + delta1
    w_sum2 = omega_m + delta2
    w_dif1 = omega_m - delta1
    w_dif2 = omega_m - delta2
    w_pr1 = delta - delta1
    w_pr2 = delta - delta2
    w_12 = delta1 - delta2

    def rhs(t, c1, c2, b):
        p_s1 = cmath.exp(1j * w_sum1 * t)
        p_s2 = cmath.exp(1j * w_sum2 * t)
        p_d1 = cmath.exp(1j * w_dif1 * t)
        p_d2 = cmath.exp(1j * w_dif2 * t)
        p_12 = cmath.exp(1j * w_12 * t)
        bc = b.conjugate()
        dc1 = (-hk1 * c1 + 1j * K1 * (bc * p_s1 + b * p_d1.conjugate())
               + eps_l * cmath.exp(-1j * w_pr1 * t) - 1j * J * c2 * p_12)
        dc2 = (-hk2 * c2 - 1j * K2 * (bc * p_s2 + b * p_d2.conjugate())
               + eps_r * cmath.exp(-1j * w_pr2 * t) - 1j * J * c1 * p_12.conjugate())
        db = (-hg * b
              + 1j * (K1c * c1 * p_d1 + K1 * c1.conjugate() * p_s1)
              - 1j * (K2c * c2 * p_d2 + K2 * c2.conjugate() * p_s2))
        return dc1, dc2, db

    n_out = n_steps // stride + 1
    out = np.zeros((n_out, 3), dtype=np.complex128)
    y0 = 0j
    y1 = 0j
    y2 = 0j
    half = 0.5 * dt
    for n in range(n_steps):
        t = n * dt
        a0, a1, a2 = rhs(t, y0, y1, y2)
        b0, b1, b2 = rhs(t + half, y0 + half * a0, y1 + half * a1, y2 + half * a2)
        c0, c1_, c2_ = rhs(t + half, y0 + half * b0, y1 + half * b1, y2 + half * b2)
        d0, d1, d2 = rhs(t + dt, y0 + dt * c0, y1 + dt * c1_, y2 + dt * c2_)
        s = dt / 6.0
        y0 = y0 + s * (a0 + 2.0 * b0 + 2.0 * c0 + d0)
        y1 = y1 + s * (a1 + 2.0 * b1 + 2.0 * c1_ + d1)
        y2 = y2 + s * (a2 + 2.0 * b2 + 2.0 * c2_ + d2)
        if (n + 1) % stride == 0:
            j = (n + 1) // stride
            out[j, 0] = y0
            out[j, 1] = y1
            out[j, 2] = y2
    return out


def rk4_full_numpy(kappa1, kappa2, gamma, omega_m, delta1, delta2, K1, K2, J,
                   eps_l, eps_r, delta, dt, n_steps, stride):
    return _rk4_full_impl(
        float(kappa1), float(kappa2), float(gamma), float(omega_m), float(delta1), float(delta2),
        complex(K1), complex(K2), float(J), complex(eps_l), complex(eps_r), float(delta),
        float(dt), int(n_steps), int(stride),
    )


# ---------------------------------------------------------------------------
# compiled variants and dispatch

if HAVE_NUMBA:
    transmission_grid_numba = njit(parallel=True)(_transmission_grid_loop)
    nonreciprocity_objective_numba = njit(parallel=True)(_nonreciprocity_objective_loop)
    _rk4_linear_nb = njit(_rk4_linear_impl)
    _rk4_full_nb = njit(_rk4_full_impl)

    def rk4_linear_numba(M, f, x, dt, n_steps, stride):
        return _rk4_linear_nb(
            np.ascontiguousarray(M, dtype=np.complex128),
            np.ascontiguousarray(f, dtype=np.complex128),
            float(x), float(dt), int(n_steps), int(stride),
        )

    def rk4_full_numba(kappa1, kappa2, gamma, omega_m, delta1, delta2, K1, K2, J,
                       eps_l, eps_r, delta, dt, n_steps, stride):
        return _rk4_full_nb(
            float(kappa1), float(kappa2), float(gamma), float(omega_m), float(delta1), float(delta2),
            complex(K1), complex(K2), float(J), complex(eps_l), complex(eps_r), float(delta),
            float(dt), int(n_steps), int(stride),
        )

    def _transmission_grid_numba_wrapper(G, theta, J, kappa, gamma, xs):
        return transmission_grid_numba(
            float(G), float(theta), float(J), float(kappa), float(gamma),
            np.ascontiguousarray(xs, dtype=np.float64),
        )

    def _objective_numba_wrapper(Js, Gs, xs, kappa, gamma, theta, pass_lr):
        return nonreciprocity_objective_numba(
            np.ascontiguousarray(Js, dtype=np.float64),
            np.ascontiguousarray(Gs, dtype=np.float64),
            np.ascontiguousarray(xs, dtype=np.float64),
            float(kappa), float(gamma), float(theta), bool(pass_lr),
        )
else:  # pragma: no cover
    transmission_grid_numba = None
    nonreciprocity_objective_numba = None
    rk4_linear_numba = None
    rk4_full_numba = None

if USE_NUMBA:
    transmission_grid = _transmission_grid_numba_wrapper
    nonreciprocity_objective = _objective_numba_wrapper
    rk4_linear = rk4_linear_numba
    rk4_full = rk4_full_numba
else:
    transmission_grid = transmission_grid_numpy
    nonreciprocity_objective = nonreciprocity_objective_numpy
    rk4_linear = rk4_linear_numpy
    rk4_full = rk4_full_numpy
