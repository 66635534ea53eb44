import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nonrecip.conditions import (
    Branch,
    Direction,
    perfect_conditions,
    isolation_direction,
    required_coupling_J,
    verify_condition_by_grid,
)
from nonrecip.errors import InvalidBranch, ThetaDegenerate
from nonrecip.model import LinearizedSystem
from nonrecip.response import scattering_point

PI = math.pi


def test_required_J_half_pi_upper():
    J = required_coupling_J(1.0, 0.3, -PI / 2, "upper")
    assert J.real == pytest.approx(0.5, abs=1e-15)
    assert abs(J.imag) < 1e-15


def test_required_J_half_pi_lower():
    # the two sign choices are complex conjugates of each other
    J = required_coupling_J(1.7, 0.3, PI / 2, "lower")
    assert J.real == pytest.approx(-0.85, abs=1e-15)
    assert abs(J.imag) < 1e-15
    assert required_coupling_J(1.7, 0.3, -PI / 2, "lower").real == pytest.approx(0.85, abs=1e-15)


@pytest.mark.parametrize("theta", [-2.0, -0.4, 0.3, 1.1, 2.9])
def test_required_J_branches_conjugate(theta):
    up = required_coupling_J(1.3, 0.4, theta, "upper")
    lo = required_coupling_J(1.3, 0.4, theta, "lower")
    assert abs(up - lo.conjugate()) < 1e-15


def test_required_J_equal_damping_lower_quarter_pi():
    # real, magnitude csc(theta)/2, but negative so unphysical on this branch
    J = required_coupling_J(1.0, 1.0, PI / 4, "lower")
    assert J.real == pytest.approx(-math.sqrt(2) / 2, abs=1e-15)
    assert abs(J.imag) < 1e-15


def test_required_J_equal_damping_upper_negative_quarter_pi():
    J = required_coupling_J(1.0, 1.0, -PI / 4, "upper")
    assert J.real == pytest.approx(math.sqrt(2) / 2, abs=1e-15)
    assert abs(J.imag) < 1e-15


def test_required_J_complex_away_from_branches():
    J = required_coupling_J(2.0, 1.0, PI / 3, "upper")
    assert abs(J.imag) > 1e-3


@pytest.mark.parametrize("theta", [0.0, PI, -PI, 2 * PI, 1e-13])
def test_required_J_degenerate(theta):
    with pytest.raises(ThetaDegenerate):
        required_coupling_J(1.0, 1.0, theta)


def test_required_J_bad_sign():
    with pytest.raises(ValueError):
        required_coupling_J(1.0, 1.0, 1.0, "middle")


def test_required_J_real_positive_grid():
    thetas = np.concatenate([np.linspace(-PI, PI, 97)[1:-1], [-PI / 2, PI / 2, -PI / 4, PI / 4, -3 * PI / 4]])
    thetas = thetas[np.abs(np.sin(thetas)) > 1e-9]
    ratios = np.concatenate([np.logspace(-2, 2, 96), [1.0]])
    ratios = ratios[(ratios == 1.0) | (np.abs(ratios - 1) > 1e-6)]
    count = 0
    for r in ratios:
        for th in thetas:
            for sign in ("upper", "lower"):
                J = required_coupling_J(r, 1.0, th, sign)
                real = abs(J.imag) <= 1e-10 * abs(J)
                # real exactly on cos(theta) = 0 or kappa = gamma
                expect_real = abs(math.cos(th)) < 1e-12 or r == 1.0
                assert real == expect_real, (r, th, sign, J)
                if real:
                    positive = J.real > 0
                    assert positive == (math.sin(th) < 0), (r, th, sign, J)
                count += 1
    assert count >= 10_000 // 2


def test_perfect_conditions_half_pi():
    c = perfect_conditions(1.0, 0.01, -PI / 2)
    assert c.branch is Branch.ThetaHalfPi and c.direction is Direction.L_to_R
    assert c.x_star == 0.0 and c.J_star == 0.5 and c.G_star == pytest.approx(0.05, rel=1e-15)
    c = perfect_conditions(2.0, 0.5, PI / 2)
    assert c.direction is Direction.R_to_L
    assert c.J_star == 1.0 and c.G_star == pytest.approx(0.5, rel=1e-15)


def test_perfect_conditions_both_branches_report_half_pi():
    c = perfect_conditions(1.0, 1.0, -PI / 2)
    assert c.branch is Branch.ThetaHalfPi
    assert c.G_star == pytest.approx(0.5) and c.J_star == pytest.approx(0.5)


@pytest.mark.parametrize(
    "theta, x, direction",
    [
        (-3 * PI / 4, -0.5, Direction.L_to_R),
        (-PI / 4, 0.5, Direction.L_to_R),
        (PI / 4, 0.5, Direction.R_to_L),
        (3 * PI / 4, -0.5, Direction.R_to_L),
    ],
)
def test_perfect_conditions_equal_damping(theta, x, direction):
    c = perfect_conditions(1.0, 1.0, theta)
    assert c.branch is Branch.EqualDamping and c.direction is direction
    assert c.x_star == pytest.approx(x, abs=1e-15)
    assert c.J_star == pytest.approx(math.sqrt(2) / 2, rel=1e-15)
    assert c.G_star == c.J_star


@pytest.mark.parametrize("args", [(1.0, 2.0, PI / 3), (1.0, 1.0, 0.0), (1.0, 1.0, PI), (3.0, 1.0, 0.2)])
def test_perfect_conditions_none(args):
    assert perfect_conditions(*args) is None


def test_perfect_conditions_validates_rates():
    with pytest.raises(ValueError):
        perfect_conditions(0.0, 1.0, 1.0)


def test_isolation_direction():
    assert isolation_direction(-PI / 2, "ThetaHalfPi") is Direction.L_to_R
    assert isolation_direction(PI / 2, Branch.ThetaHalfPi) is Direction.R_to_L
    assert isolation_direction(0.3, Branch.EqualDamping) is Direction.R_to_L
    assert isolation_direction(-0.3, Branch.EqualDamping) is Direction.L_to_R
    assert isolation_direction(-PI / 2 + 2 * PI, "ThetaHalfPi") is Direction.L_to_R


@pytest.mark.parametrize("theta, branch", [(PI / 3, "ThetaHalfPi"), (0.0, "EqualDamping"), (PI, "EqualDamping")])
def test_isolation_direction_invalid(theta, branch):
    with pytest.raises(InvalidBranch):
        isolation_direction(theta, branch)


def test_isolation_direction_unknown_branch():
    with pytest.raises(ValueError):
        isolation_direction(0.3, "Sideways")


@settings(max_examples=200, deadline=None)
@given(
    st.floats(1e-2, 10),
    st.floats(1e-2, 10),
    st.sampled_from([-PI / 2, PI / 2]),
)
def test_half_pi_conditions_are_perfect(kappa, gamma, theta):
    c = perfect_conditions(kappa, gamma, theta)
    pt = scattering_point(LinearizedSystem(G=c.G_star, theta=theta, J=c.J_star, kappa=kappa, gamma=gamma), c.x_star)
    passed, blocked = (pt.T_LR, pt.T_RL) if c.direction is Direction.L_to_R else (pt.T_RL, pt.T_LR)
    assert passed == pytest.approx(1.0, abs=1e-9)
    assert blocked == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-2, 10), st.floats(0.05, PI - 0.05), st.sampled_from([1.0, -1.0]))
def test_equal_damping_conditions_are_perfect(gamma, mag, s):
    theta = s * mag
    c = perfect_conditions(gamma, gamma, theta)
    lin = LinearizedSystem(G=c.G_star, theta=theta, J=c.J_star, kappa=gamma, gamma=gamma)
    pt = scattering_point(lin, c.x_star)
    passed, blocked = (pt.T_LR, pt.T_RL) if c.direction is Direction.L_to_R else (pt.T_RL, pt.T_LR)
    assert passed == pytest.approx(1.0, abs=1e-9)
    assert blocked == pytest.approx(0.0, abs=1e-9)


def test_half_pi_coupling_independent_of_gamma_for_J():
    for gamma in (1e-3, 0.1, 1.0, 7.0):
        c = perfect_conditions(1.0, gamma, -PI / 2)
        assert c.J_star == 0.5 and c.x_star == 0.0


def test_minimum_equal_damping_coupling():
    thetas = np.linspace(0.01, PI - 0.01, 999)
    G = np.array([perfect_conditions(2.0, 2.0, t).G_star for t in thetas])
    assert G.min() == pytest.approx(1.0, rel=1e-6)
    assert abs(thetas[np.argmin(G)] - PI / 2) < 4e-3


@pytest.mark.parametrize("kappa, gamma, theta", [(1.0, 1.0, -PI / 2), (1.0, 0.01, -PI / 2), (1.0, 1.0, PI / 4)])
def test_grid_verifier(kappa, gamma, theta):
    cond = perfect_conditions(kappa, gamma, theta)
    report = verify_condition_by_grid(kappa, gamma, theta, cond)
    assert report.within_one_step
    assert report.objective < 0.05
    assert all(d <= s * (1 + 1e-9) for d, s in zip(report.distance, report.steps))
