"""Parameter conditions for perfect optical nonreciprocity.

Perfect nonreciprocity means one transmission is exactly 1 while the
opposite one is exactly 0.  For the symmetric model this happens on two
families of parameters:

* theta = -pi/2 (or +pi/2 for the reverse direction), any gamma:
  x = 0, J = kappa/2, G = sqrt(kappa gamma)/2;
* kappa = gamma, any theta not a multiple of pi:
  x = s gamma cot(theta)/2, J = G = s gamma csc(theta)/2 with s = sign(sin theta).
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidBranch, ThetaDegenerate
from .model import wrap_phase

THETA_TOL = 1e-12
KAPPA_GAMMA_REL_TOL = 1e-9


class Direction(str, enum.Enum):
    L_to_R = "L_to_R"
    R_to_L = "R_to_L"


class Branch(str, enum.Enum):
    ThetaHalfPi = "ThetaHalfPi"
    EqualDamping = "EqualDamping"


class Sign(str, enum.Enum):
    upper = "upper"
    lower = "lower"


@dataclass(frozen=True)
class ConditionSet:
    x_star: float
    J_star: float
    G_star: float
    direction: Direction
    branch: Branch

    def as_dict(self) -> dict:
        return {
            "branch": self.branch.value,
            "x": self.x_star,
            "J": self.J_star,
            "G": self.G_star,
            "direction": self.direction.value,
        }


def _is_multiple_of_pi(theta: float) -> bool:
    t = wrap_phase(theta)
    return abs(t) <= THETA_TOL or abs(abs(t) - math.pi) <= THETA_TOL


def required_coupling_J(kappa, gamma, theta, sign="upper") -> complex:
    """Tunnelling rate demanded by T_LR = 1, T_RL = 0 at the given phase.

    ``J = -exp(-/+ i theta) (gamma cot(theta) +/- i kappa) / 2`` with the
    upper signs for ``sign="upper"``.  A physical solution exists only where
    the result is real and positive.

    Raises
    ------
    ThetaDegenerate
        If theta is a multiple of pi (cot undefined).
    """
    sign = Sign(sign)
    if _is_multiple_of_pi(theta):
        raise ThetaDegenerate(f"theta={theta} is a multiple of pi")
    s = 1.0 if sign is Sign.upper else -1.0
    cot = math.cos(theta) / math.sin(theta)
    return -cmath.exp(-s * 1j * theta) * (gamma * cot + s * 1j * kappa) / 2.0


def isolation_direction(theta, branch) -> Direction:
    """Which port pair is transparent at the perfect point of ``branch``.

    Raises
    ------
    InvalidBranch
        If ``branch`` has no perfect point at this theta.
    """
    branch = Branch(branch)
    t = wrap_phase(theta)
    if branch is Branch.ThetaHalfPi:
        if abs(t + 0.5 * math.pi) <= THETA_TOL:
            return Direction.L_to_R
        if abs(t - 0.5 * math.pi) <= THETA_TOL:
            return Direction.R_to_L
        raise InvalidBranch(f"theta={theta} is not +/-pi/2")
    if _is_multiple_of_pi(t):
        raise InvalidBranch(f"theta={theta} is a multiple of pi")
    return Direction.R_to_L if t > 0 else Direction.L_to_R


def perfect_conditions(kappa, gamma, theta) -> ConditionSet | None:
    """Analytic (x, J, G) for perfect nonreciprocity, or None if none exists.

    When both families apply (kappa = gamma and theta = +/-pi/2) the
    ``ThetaHalfPi`` branch is reported; the two coincide there.
    """
    if not (kappa > 0 and gamma > 0):
        raise ValueError(f"kappa and gamma must be > 0, got {kappa}, {gamma}")
    t = wrap_phase(theta)
    if abs(abs(t) - 0.5 * math.pi) <= THETA_TOL:
        return ConditionSet(
            x_star=0.0,
            J_star=0.5 * kappa,
            G_star=0.5 * math.sqrt(kappa * gamma),
            direction=isolation_direction(t, Branch.ThetaHalfPi),
            branch=Branch.ThetaHalfPi,
        )
    if abs(kappa - gamma) <= KAPPA_GAMMA_REL_TOL * kappa and not _is_multiple_of_pi(t):
        s = 1.0 if t > 0 else -1.0
        sin_t = math.sin(t)
        x = s * gamma * math.cos(t) / (2.0 * sin_t)
        coupling = s * gamma / (2.0 * sin_t)
        return ConditionSet(
            x_star=x,
            J_star=coupling,
            G_star=coupling,
            direction=isolation_direction(t, Branch.EqualDamping),
            branch=Branch.EqualDamping,
        )
    return None


@dataclass(frozen=True)
class GridReport:
    """Outcome of the brute-force search around an analytic condition."""

    minimizer: tuple[float, float, float]
    objective: float
    steps: tuple[float, float, float]
    distance: tuple[float, float, float]
    within_one_step: bool


def verify_condition_by_grid(kappa, gamma, theta, condition: ConditionSet, n: int = 41) -> GridReport:
    """Locate the best (J, G, x) on an n^3 grid around ``condition``.

    The grid spans J in [0.2, 2] J*, G in [0.2, 2] G*, x in x* +/- 2 kappa and
    the minimized quantity is T_blocked + (1 - T_passed), which vanishes
    exactly at a perfect point.
    """
    Js = np.linspace(0.2 * condition.J_star, 2.0 * condition.J_star, n)
    Gs = np.linspace(0.2 * condition.G_star, 2.0 * condition.G_star, n)
    xs = np.linspace(condition.x_star - 2.0 * kappa, condition.x_star + 2.0 * kappa, n)
    pass_lr = condition.direction is Direction.L_to_R
    obj = kernels.nonreciprocity_objective(Js, Gs, xs, kappa, gamma, wrap_phase(theta), pass_lr)
    a, b, c = np.unravel_index(int(np.argmin(obj)), obj.shape)
    best = (float(Js[a]), float(Gs[b]), float(xs[c]))
    steps = (float(Js[1] - Js[0]), float(Gs[1] - Gs[0]), float(xs[1] - xs[0]))
    target = (condition.J_star, condition.G_star, condition.x_star)
    dist = tuple(abs(u - v) for u, v in zip(best, target))
    within = all(d <= s * (1.0 + 1e-9) for d, s in zip(dist, steps))
    return GridReport(
        minimizer=best,
        objective=float(obj[a, b, c]),
        steps=steps,
        distance=dist,
        within_one_step=within,
    )
