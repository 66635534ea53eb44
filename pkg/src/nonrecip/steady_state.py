"""Self-consistent mean-field steady state and its inversion.

The mechanical displacement u = b_s + conj(b_s) is the only channel through
which the cavity amplitudes feed back on themselves (it shifts the effective
detunings to delta_c -/+ g0 u), so the fixed point is sought in that single
real variable.
"""
from __future__ import annotations

import cmath
import math

from .errors import NoConvergence, ZeroG0
from .model import SteadyState, SystemParams

DEFAULT_RELAX = 0.5
DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 10_000


def _cavity_amplitudes(p: SystemParams, delta1: float, delta2: float):
    a1 = 0.5 * p.kappa1 + 1j * delta1
    a2 = 0.5 * p.kappa2 + 1j * delta2
    den = p.J * p.J + a1 * a2
    c1 = (a2 * p.eps_c - 1j * p.J * p.eps_d) / den
    c2 = (a1 * p.eps_d - 1j * p.J * p.eps_c) / den
    return c1, c2


def _mechanical_amplitude(p: SystemParams, c1: complex, c2: complex) -> complex:
    imbalance = abs(c2) ** 2 - abs(c1) ** 2
    return -1j * p.g0 * imbalance / (0.5 * p.gamma + 1j * p.omega_m)


def _detunings(p: SystemParams, b_s: complex):
    shift = p.g0 * 2.0 * b_s.real
    return p.delta_c - shift, p.delta_c + shift


def _state_at(p: SystemParams, u: float) -> SteadyState:
    c1, c2 = _cavity_amplitudes(p, p.delta_c - p.g0 * u, p.delta_c + p.g0 * u)
    b = _mechanical_amplitude(p, c1, c2)
    d1, d2 = _detunings(p, b)
    return SteadyState(b_s=b, c1_s=c1, c2_s=c2, delta1=d1, delta2=d2)


def steady_residual(params: SystemParams, steady: SteadyState) -> float:
    """Largest mismatch among the three mean-field relations.

    The detunings are recomputed from ``steady.b_s``; each relation is
    evaluated in the solved form ``amplitude = expression`` and the maximum
    of ``|amplitude - expression|`` is returned.
    """
    d1, d2 = _detunings(params, complex(steady.b_s))
    c1, c2 = _cavity_amplitudes(params, d1, d2)
    b = _mechanical_amplitude(params, steady.c1_s, steady.c2_s)
    return max(abs(steady.b_s - b), abs(steady.c1_s - c1), abs(steady.c2_s - c2))


def _polish(p: SystemParams, u_prev: float, u: float, max_steps: int = 8) -> SteadyState:
    """Secant refinement of F(u) = 2 Re b_s(u) - u near a converged iterate.

    A damped iteration stops on the step size, which leaves an error of
    order step / (1 - contraction).  A few secant steps remove it; a step is
    kept only while it lowers the residual.
    """
    def F(v):
        return 2.0 * _state_at(p, v).b_s.real - v

    best = _state_at(p, u)
    best_res = steady_residual(p, best)
    f_prev, f = F(u_prev), F(u)
    for _ in range(max_steps):
        if f == f_prev or best_res == 0.0:
            break
        u_prev, u = u, u - f * (u - u_prev) / (f - f_prev)
        if not math.isfinite(u):
            break
        f_prev, f = f, F(u)
        cand = _state_at(p, u)
        res = steady_residual(p, cand)
        if not res < best_res:
            break
        best, best_res = cand, res
    return best


def solve_steady_state(
    params: SystemParams,
    relax: float = DEFAULT_RELAX,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SteadyState:
    """Solve the mean-field equations by damped fixed-point iteration.

    Starting from u = 0 (bare detunings), iterate
    ``u <- (1 - relax) u + relax * 2 Re b_s(u)`` until
    ``|u_new - u| <= tol * (1 + |u_new|)``, then refine with a few secant
    steps on ``2 Re b_s(u) - u``.

    Parameters
    ----------
    params : SystemParams
    relax : float, optional
        Damping factor in (0, 1].
    tol : float, optional
        Relative step tolerance on u.
    max_iter : int, optional

    Returns
    -------
    SteadyState

    Raises
    ------
    NoConvergence
        When the iteration cap is hit or the iterate becomes non-finite,
        typically in a bistable or unstable regime.  Carries the residual of
        the last iterate.
    """
    if not 0.0 < relax <= 1.0:
        raise ValueError(f"relax must lie in (0, 1], got {relax}")
    u = 0.0
    for n in range(1, max_iter + 1):
        state = _state_at(params, u)
        u_new = (1.0 - relax) * u + relax * 2.0 * state.b_s.real
        if not math.isfinite(u_new):
            raise NoConvergence("fixed-point iterate became non-finite", iterations=n)
        if abs(u_new - u) <= tol * (1.0 + abs(u_new)):
            return _polish(params, u, u_new)
        u = u_new
    last = _state_at(params, u)
    res = steady_residual(params, last)
    raise NoConvergence(
        f"no convergence after {max_iter} iterations (residual {res:.3e})",
        residual=res,
        iterations=max_iter,
    )


def drives_for_target(G, theta, J, kappa1, kappa2, g0, delta1, delta2):
    """Coupling-field amplitudes that produce a prescribed effective coupling.

    Places ``c1_s = G / g0`` on the real axis and ``c2_s = c1_s exp(i theta)``
    and inverts the linear steady-state relations for the drives.

    Returns
    -------
    eps_c, eps_d : complex

    Raises
    ------
    ZeroG0
        If ``g0 <= 0`` (the coupling cannot be set by the drives).
    """
    if not g0 > 0:
        raise ZeroG0(f"g0 must be > 0, got {g0}")
    c1 = complex(G / g0)
    c2 = c1 * cmath.exp(1j * theta)
    eps_c = (0.5 * kappa1 + 1j * delta1) * c1 + 1j * J * c2
    eps_d = (0.5 * kappa2 + 1j * delta2) * c2 + 1j * J * c1
    return eps_c, eps_d
