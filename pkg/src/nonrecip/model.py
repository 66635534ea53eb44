"""Domain types for the double-cavity optomechanical system.

All rates share one angular-frequency unit chosen by the caller (hbar = 1).
Two optical modes c1, c2 (decay kappa1, kappa2) tunnel-couple with rate J and
couple to one mechanical mode b (frequency omega_m, decay gamma) through the
radiation-pressure term g0 (c2^dag c2 - c1^dag c1)(b^dag + b).  Strong drives
eps_c, eps_d pump c1, c2; weak probes eps_L, eps_R are detuned by x from the
mechanical red sideband.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import AsymmetricSystem, NegativeCoupling, NonPositiveRate, ZeroCoupling

KAPPA_REL_TOL = 1e-9
G_REL_TOL = 1e-6


def wrap_phase(theta: float) -> float:
    """Map an angle onto the principal interval (-pi, pi]."""
    theta = float(theta)
    if -math.pi < theta <= math.pi:
        return theta
    wrapped = math.remainder(theta, 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def _require_finite(**values):
    for name, value in values.items():
        if not cmath.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SystemParams:
    """Physical parameter set of the driven double-cavity system.

    Parameters
    ----------
    kappa1, kappa2 : float
        Amplitude decay rates of the two cavities.
    gamma : float
        Mechanical decay rate.
    omega_m : float
        Mechanical frequency.
    g0 : float
        Single-photon optomechanical coupling.
    J : float
        Cavity-cavity tunnelling rate.
    delta_c : float
        Detuning of the cavities from the coupling fields, omega_0 - omega_c.
    eps_c, eps_d : complex
        Coupling-field amplitudes driving cavity 1 and cavity 2.
    """

    kappa1: float
    kappa2: float
    gamma: float
    omega_m: float
    g0: float
    J: float
    delta_c: float
    eps_c: complex = 0j
    eps_d: complex = 0j

    def __post_init__(self):
        _require_finite(
            kappa1=self.kappa1,
            kappa2=self.kappa2,
            gamma=self.gamma,
            omega_m=self.omega_m,
            g0=self.g0,
            J=self.J,
            delta_c=self.delta_c,
            eps_c=self.eps_c,
            eps_d=self.eps_d,
        )
        for name in ("kappa1", "kappa2", "gamma", "omega_m"):
            if not getattr(self, name) > 0:
                raise NonPositiveRate(f"{name} must be > 0, got {getattr(self, name)!r}")
        for name in ("g0", "J"):
            if getattr(self, name) < 0:
                raise NegativeCoupling(f"{name} must be >= 0, got {getattr(self, name)!r}")
        for name in ("kappa1", "kappa2", "gamma", "omega_m", "g0", "J", "delta_c"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "eps_c", complex(self.eps_c))
        object.__setattr__(self, "eps_d", complex(self.eps_d))


def make_system_params(
    kappa1, kappa2, gamma, omega_m, g0, J, delta_c, eps_c=0j, eps_d=0j
) -> SystemParams:
    """Validate raw fields and build a :class:`SystemParams`.

    Raises
    ------
    NonPositiveRate
        If any of kappa1, kappa2, gamma, omega_m is not strictly positive.
    NegativeCoupling
        If g0 or J is negative.
    """
    return SystemParams(kappa1, kappa2, gamma, omega_m, g0, J, delta_c, eps_c, eps_d)


@dataclass(frozen=True)
class ProbeSpec:
    """Weak probe drive: amplitudes on each port and detuning x = delta - omega_m."""

    eps_L: complex = 1.0 + 0j
    eps_R: complex = 0j
    x: float = 0.0

    def __post_init__(self):
        _require_finite(eps_L=self.eps_L, eps_R=self.eps_R, x=self.x)
        object.__setattr__(self, "eps_L", complex(self.eps_L))
        object.__setattr__(self, "eps_R", complex(self.eps_R))
        object.__setattr__(self, "x", float(self.x))


@dataclass(frozen=True)
class SteadyState:
    """Mean-field amplitudes and the effective detunings they induce."""

    b_s: complex
    c1_s: complex
    c2_s: complex
    delta1: float
    delta2: float


@dataclass(frozen=True)
class LinearizedSystem:
    """Reduced symmetric model: kappa1 = kappa2 = kappa and |G1| = |G2| = G.

    ``theta`` is the phase of the cavity-2 coupling relative to the cavity-1
    coupling, stored on (-pi, pi].
    """

    G: float
    theta: float
    J: float
    kappa: float
    gamma: float

    def __post_init__(self):
        _require_finite(G=self.G, theta=self.theta, J=self.J, kappa=self.kappa, gamma=self.gamma)
        if self.kappa <= 0 or self.gamma <= 0:
            raise NonPositiveRate(f"kappa and gamma must be > 0, got {self.kappa}, {self.gamma}")
        if self.G < 0 or self.J < 0:
            raise NegativeCoupling(f"G and J must be >= 0, got {self.G}, {self.J}")
        object.__setattr__(self, "theta", wrap_phase(self.theta))
        for name in ("G", "J", "kappa", "gamma"):
            object.__setattr__(self, name, float(getattr(self, name)))


@dataclass(frozen=True)
class GeneralLinearizedSystem:
    """Linearized model with unequal decays and complex couplings.

    Under the rotating-wave approximation the fluctuations obey::

        dc1/dt = -kappa1/2 c1 + i G1c b - i J c2 + eps_L e^{-ixt}
        dc2/dt = -kappa2/2 c2 - i G2c b - i J c1 + eps_R e^{-ixt}
        db/dt  = -gamma/2 b + i conj(G1c) c1 - i conj(G2c) c2

    so ``G1c = g0 c1_s`` and ``G2c = g0 c2_s``; the symmetric model is
    ``G1c = G``, ``G2c = G exp(i theta)``.
    """

    G1c: complex
    G2c: complex
    kappa1: float
    kappa2: float
    gamma: float
    J: float

    def __post_init__(self):
        _require_finite(
            G1c=self.G1c, G2c=self.G2c, kappa1=self.kappa1, kappa2=self.kappa2, gamma=self.gamma, J=self.J
        )
        if min(self.kappa1, self.kappa2, self.gamma) <= 0:
            raise NonPositiveRate("kappa1, kappa2 and gamma must be > 0")
        object.__setattr__(self, "G1c", complex(self.G1c))
        object.__setattr__(self, "G2c", complex(self.G2c))

    @classmethod
    def from_linearized(cls, lin: LinearizedSystem) -> "GeneralLinearizedSystem":
        return cls(
            G1c=complex(lin.G),
            G2c=lin.G * cmath.exp(1j * lin.theta),
            kappa1=lin.kappa,
            kappa2=lin.kappa,
            gamma=lin.gamma,
            J=lin.J,
        )

    @classmethod
    def from_steady(cls, params: SystemParams, steady: SteadyState) -> "GeneralLinearizedSystem":
        return cls(
            G1c=params.g0 * steady.c1_s,
            G2c=params.g0 * steady.c2_s,
            kappa1=params.kappa1,
            kappa2=params.kappa2,
            gamma=params.gamma,
            J=params.J,
        )


def linearized_from_steady(params: SystemParams, steady: SteadyState) -> LinearizedSystem:
    """Reduce a steady state to the symmetric linearized model.

    The global phase is rotated so that ``g0 * c1_s`` is real positive; only
    the relative phase ``theta = arg(c2_s / c1_s)`` survives.

    Raises
    ------
    ZeroCoupling
        If ``c1_s`` vanishes (no gauge can be fixed).
    AsymmetricSystem
        If the decays or the coupling magnitudes differ beyond tolerance.
    """
    if abs(steady.c1_s) == 0.0:
        raise ZeroCoupling("c1_s = 0: the cavity-1 coupling vanishes")
    if abs(params.kappa1 - params.kappa2) > KAPPA_REL_TOL * max(params.kappa1, params.kappa2):
        raise AsymmetricSystem(
            f"kappa1={params.kappa1} and kappa2={params.kappa2} differ; use the general oracle path"
        )
    G1 = params.g0 * abs(steady.c1_s)
    G2 = params.g0 * abs(steady.c2_s)
    if abs(G1 - G2) > G_REL_TOL * max(G1, G2):
        raise AsymmetricSystem(f"|G1|={G1} and |G2|={G2} differ; use the general oracle path")
    theta = cmath.phase(steady.c2_s * steady.c1_s.conjugate())
    return LinearizedSystem(G=G1, theta=theta, J=params.J, kappa=params.kappa1, gamma=params.gamma)
