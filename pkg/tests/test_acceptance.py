"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary) and then
asserts, so a failing criterion also fails the run.
"""
import math
import time

import numpy as np
import pytest

from nonrecip.conditions import Direction, perfect_conditions, verify_condition_by_grid
from nonrecip.errors import NoConvergence
from nonrecip.model import LinearizedSystem, ProbeSpec, linearized_from_steady, make_system_params
from nonrecip.oracle import full_transmission, linsolve_response, pair_deviation, rwa_transmission
from nonrecip.response import fwhm_arrays, response_amplitudes, scattering_point, sweep_arrays
from nonrecip.steady_state import drives_for_target, solve_steady_state, steady_residual

pytestmark = pytest.mark.acceptance

PI = math.pi


def half_pi_system(ratio, kappa=1.0):
    gamma = ratio * kappa
    return LinearizedSystem(G=0.5 * math.sqrt(kappa * gamma), theta=-PI / 2, J=0.5 * kappa,
                            kappa=kappa, gamma=gamma)


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def report(criterion, number, text, ok, elapsed, limit, detail):
    passed = ok and elapsed < limit
    criterion(number, text, passed, f"({detail}; {elapsed:.2f}s < {limit}s)")
    print(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {text} ({detail}; {elapsed:.2f}s)")
    assert ok, detail
    assert elapsed < limit, f"runtime {elapsed:.2f}s exceeds {limit}s"


def test_criterion_1_perfect_points(criterion):
    with Clock() as c:
        worst = 0.0
        for ratio in (2.0, 1.0, 0.2, 0.01):
            pt = scattering_point(half_pi_system(ratio), 0.0)
            worst = max(worst, abs(pt.T_LR - 1.0), pt.T_RL)
    report(criterion, 1, "T_LR(0)=1, T_RL(0)=0 for gamma/kappa in {2,1,1/5,1/100}",
           worst <= 1e-9, c.elapsed, 1.0, f"worst error {worst:.1e}")


def test_criterion_2_gamma_independence(criterion):
    with Clock() as c:
        pt = scattering_point(half_pi_system(1e-4), 0.0)
        worst = max(abs(pt.T_LR - 1.0), pt.T_RL)
    report(criterion, 2, "perfect point persists at gamma/kappa = 1e-4",
           worst <= 1e-9, c.elapsed, 1.0, f"worst error {worst:.1e}")


def test_criterion_3_bandwidth_narrowing(criterion):
    with Clock() as c:
        xs = np.linspace(-2.0, 2.0, 4001)
        widths = []
        for ratio in (2.0, 1.0, 0.2, 0.01):
            _, t_lr, _ = sweep_arrays(half_pi_system(ratio), xs)
            widths.append(fwhm_arrays(xs, np.abs(t_lr)))
        ok = all(a > b for a, b in zip(widths, widths[1:]))
    report(criterion, 3, "FWHM of T_LR strictly decreases with gamma/kappa",
           ok, c.elapsed, 5.0, "widths " + ", ".join(f"{w:.4f}" for w in widths))


def test_criterion_4_equal_damping_branch(criterion):
    with Clock() as c:
        xs = np.linspace(-5.0, 5.0, 1001)
        step = xs[1] - xs[0]
        worst_pair = worst_peak = 0.0
        for theta in (-PI / 4, PI / 4, -PI / 2, PI / 2, -3 * PI / 4, 3 * PI / 4):
            cond = perfect_conditions(1.0, 1.0, theta)
            lin = LinearizedSystem(G=cond.G_star, theta=theta, J=cond.J_star, kappa=1.0, gamma=1.0)
            pt = scattering_point(lin, cond.x_star)
            lr = cond.direction is Direction.L_to_R
            passed, blocked = (pt.T_LR, pt.T_RL) if lr else (pt.T_RL, pt.T_LR)
            worst_pair = max(worst_pair, abs(passed - 1.0), blocked)
            # peak of the passing curve against +/- gamma cot(theta) / 2
            _, t_lr, t_rl = sweep_arrays(lin, xs)
            T = np.abs(t_lr if lr else t_rl)
            expected = -math.cos(theta) / (2.0 * math.sin(theta)) if lr else math.cos(theta) / (2.0 * math.sin(theta))
            worst_peak = max(worst_peak, abs(xs[int(np.argmax(T))] - expected))
        g_min = [perfect_conditions(1.0, 1.0, s * PI / 2).G_star for s in (1, -1)]
        ok = worst_pair <= 1e-9 and worst_peak <= step * (1 + 1e-9) and g_min == [0.5, 0.5]
    report(criterion, 4, "equal-damping perfect pairs, peak positions and G*(+/-pi/2) = gamma/2",
           ok, c.elapsed, 5.0, f"pair error {worst_pair:.1e}, peak offset {worst_peak:.1e}, G* {g_min}")


def test_criterion_5_direction_switching(criterion):
    with Clock() as c:
        xs = np.linspace(-5.0, 5.0, 2001)
        violations = checked = 0
        for theta, lr_wins in ((-PI / 4, True), (PI / 4, False)):
            cond = perfect_conditions(1.0, 1.0, theta)
            lin = LinearizedSystem(G=cond.G_star, theta=theta, J=cond.J_star, kappa=1.0, gamma=1.0)
            _, t_lr, t_rl = sweep_arrays(lin, xs)
            T_lr, T_rl = np.abs(t_lr), np.abs(t_rl)
            mask = (np.abs(xs - cond.x_star) <= 1.0) & ~((T_lr < 1e-6) & (T_rl < 1e-6))
            good = T_lr[mask] > T_rl[mask] if lr_wins else T_lr[mask] < T_rl[mask]
            violations += int(np.count_nonzero(~good))
            checked += int(mask.sum())
    report(criterion, 5, "T_LR > T_RL at theta=-pi/4 and T_LR < T_RL at theta=+pi/4 near the peak",
           violations == 0 and checked > 0, c.elapsed, 5.0, f"{violations} violations in {checked} points")


def test_criterion_6_oracle_equivalence(criterion):
    rng = np.random.default_rng(20240611)
    with Clock() as c:
        worst_lin = 0.0
        for _ in range(1000):
            lin = LinearizedSystem(G=rng.uniform(0, 2), theta=rng.uniform(-PI, PI), J=rng.uniform(0, 2),
                                   kappa=rng.uniform(0.1, 3), gamma=rng.uniform(1e-3, 3))
            probe = ProbeSpec(complex(*rng.normal(size=2)), complex(*rng.normal(size=2)), rng.uniform(-4, 4))
            a = response_amplitudes(lin, probe).as_array()
            b = linsolve_response(lin, probe).as_array()
            worst_lin = max(worst_lin, np.linalg.norm(a - b) / np.linalg.norm(b))
        worst_td = 0.0
        for _ in range(100):
            lin = LinearizedSystem(G=rng.uniform(0, 2), theta=rng.uniform(-PI, PI), J=rng.uniform(0, 2),
                                   kappa=1.0, gamma=rng.uniform(0.05, 3))
            x = rng.uniform(-3, 3)
            pt = linsolve_response(lin, ProbeSpec(1, 0, x)), linsolve_response(lin, ProbeSpec(0, 1, x))
            ref = (pt[0].c2_plus * lin.kappa, pt[1].c1_plus * lin.kappa)
            worst_td = max(worst_td, pair_deviation(rwa_transmission(lin, x), ref))
        ok = worst_lin <= 1e-10 and worst_td <= 1e-3
    report(criterion, 6, "closed form vs linear solve (1000 draws), time domain vs linear solve (100 draws)",
           ok, c.elapsed, 60.0, f"worst {worst_lin:.1e} and {worst_td:.1e}")


def test_criterion_7_symmetry(criterion):
    with Clock() as c:
        xs = np.linspace(-3, 3, 101)
        thetas = np.linspace(-PI, PI, 21)
        base = dict(G=0.6, J=0.4, kappa=1.0, gamma=0.5)
        worst_recip = worst_mirror = 0.0
        for theta in (0.0, PI):
            _, a, b = sweep_arrays(LinearizedSystem(theta=theta, **base), xs)
            worst_recip = max(worst_recip, np.abs(a - b).max())
        for theta in thetas:
            _, a, _ = sweep_arrays(LinearizedSystem(theta=theta, **base), xs)
            _, _, b = sweep_arrays(LinearizedSystem(theta=-theta, **base), xs)
            worst_mirror = max(worst_mirror, np.abs(a - b).max())
        ok = worst_recip < 1e-12 and worst_mirror < 1e-12
    report(criterion, 7, "reciprocity at theta in {0, pi} and t_LR(theta) = t_RL(-theta)",
           ok, c.elapsed, 5.0, f"reciprocity {worst_recip:.1e}, mirror {worst_mirror:.1e}")


def test_criterion_8_rwa_trend(criterion):
    target = half_pi_system(1.0)
    x = 0.3
    with Clock() as c:
        devs = []
        for factor in (25, 50, 100, 200):
            omega_m = factor * target.kappa
            eps_c, eps_d = drives_for_target(target.G, target.theta, target.J, 1.0, 1.0, 1e-3, omega_m, omega_m)
            params = make_system_params(1.0, 1.0, target.gamma, omega_m, 1e-3, target.J, omega_m, eps_c, eps_d)
            st = solve_steady_state(params)
            lin = linearized_from_steady(params, st)
            pt = scattering_point(lin, x)
            devs.append(pair_deviation(full_transmission(params, st, x, 40.0), (pt.t_LR, pt.t_RL)))
        ok = all(a > b for a, b in zip(devs, devs[1:]))
    report(criterion, 8, "full-equation deviation from the RWA result decreases with omega_m",
           ok, c.elapsed, 120.0, "deviations " + ", ".join(f"{d:.2e}" for d in devs))


def test_criterion_9_steady_state(criterion):
    rng = np.random.default_rng(7)
    with Clock() as c:
        converged = failed = bad = 0
        worst_res = worst_relax = 0.0
        for _ in range(100):
            kappa = rng.uniform(0.5, 2.0)
            omega_m = rng.uniform(0.5, 20.0)
            params = make_system_params(
                kappa, kappa, rng.uniform(1e-3, 1.0), omega_m, 10 ** rng.uniform(-3, -1), rng.uniform(0, 1),
                rng.uniform(-omega_m, omega_m),
                complex(*rng.uniform(-100, 100, 2)), complex(*rng.uniform(-100, 100, 2)),
            )
            try:
                st = solve_steady_state(params)
            except NoConvergence:
                failed += 1
                continue
            converged += 1
            res = steady_residual(params, st)
            worst_res = max(worst_res, res)
            bad += res >= 1e-10
            for relax in (0.3, 0.7):
                try:
                    other = solve_steady_state(params, relax=relax)
                except NoConvergence:
                    continue
                worst_relax = max(worst_relax, abs(other.b_s - st.b_s) / (1 + abs(st.b_s)))
        ok = bad == 0 and worst_relax <= 1e-10 and converged + failed == 100
    report(criterion, 9, "random steady states converge with residual < 1e-10 or report NoConvergence",
           ok, c.elapsed, 10.0,
           f"{converged} converged, {failed} NoConvergence, residual {worst_res:.1e}, relax spread {worst_relax:.1e}")


def test_criterion_10_grid_verifier(criterion):
    with Clock() as c:
        outcomes = []
        for kappa, gamma, theta in ((1.0, 1.0, -PI / 2), (1.0, 0.01, -PI / 2), (1.0, 1.0, PI / 4)):
            cond = perfect_conditions(kappa, gamma, theta)
            outcomes.append(verify_condition_by_grid(kappa, gamma, theta, cond, n=41).within_one_step)
    report(criterion, 10, "brute-force grid optimum within one step of the analytic conditions",
           all(outcomes), c.elapsed, 60.0, f"within one step: {outcomes}")
