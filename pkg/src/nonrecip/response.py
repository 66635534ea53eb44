"""Closed-form probe response of the symmetric linearized model.

With gamma_x = gamma - 2ix and kappa_x = kappa - 2ix the common denominator
of all response amplitudes is

    D(x) = 8 G^2 kappa_x + (4 J^2 + kappa_x^2) gamma_x + 16 i G^2 J cos(theta)

and only the e^{-ixt} components of the fluctuations are driven.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .errors import BadGrid, NotFound, SingularDenominator
from .model import LinearizedSystem, ProbeSpec

SINGULAR_THRESHOLD = 1e-30


@dataclass(frozen=True)
class ResponseAmplitudes:
    """Amplitudes of the e^{-ixt} components; the e^{+ixt} components vanish."""

    b_plus: complex
    c1_plus: complex
    c2_plus: complex

    def as_array(self) -> np.ndarray:
        return np.array([self.c1_plus, self.c2_plus, self.b_plus], dtype=np.complex128)


@dataclass(frozen=True)
class ScatteringPoint:
    x: float
    t_LR: complex
    t_RL: complex
    T_LR: float
    T_RL: float

    @classmethod
    def from_coefficients(cls, x, t_LR, t_RL) -> "ScatteringPoint":
        t_LR, t_RL = complex(t_LR), complex(t_RL)
        return cls(float(x), t_LR, t_RL, abs(t_LR), abs(t_RL))


def _denominator(lin: LinearizedSystem, x: float):
    gx = lin.gamma - 2j * x
    kx = lin.kappa - 2j * x
    G2 = lin.G * lin.G
    D = 8.0 * G2 * kx + (4.0 * lin.J**2 + kx * kx) * gx + 16j * G2 * lin.J * math.cos(lin.theta)
    if not abs(D) > SINGULAR_THRESHOLD:
        raise SingularDenominator(f"|D(x={x})| = {abs(D):.3e} is below {SINGULAR_THRESHOLD}")
    return D, gx, kx


def response_amplitudes(lin: LinearizedSystem, probe: ProbeSpec) -> ResponseAmplitudes:
    """Steady response of the fluctuations to the probe pair.

    Raises
    ------
    SingularDenominator
        If ``|D(x)|`` is not above 1e-30.
    """
    D, gx, kx = _denominator(lin, probe.x)
    G, J, th = lin.G, lin.J, lin.theta
    eL, eR = probe.eps_L, probe.eps_R
    em = cmath.exp(-1j * th)
    ep = cmath.exp(1j * th)
    b = 4.0 * G * ((1j * kx - 2.0 * J * em) * eL + (2.0 * J - 1j * kx * em) * eR) / D
    c1 = (2.0 * (4.0 * G * G + gx * kx) * eL + (8.0 * G * G * em - 4j * J * gx) * eR) / D
    c2 = (2.0 * (4.0 * G * G + gx * kx) * eR + (8.0 * G * G * ep - 4j * J * gx) * eL) / D
    return ResponseAmplitudes(b_plus=b, c1_plus=c1, c2_plus=c2)


def output_fields(lin: LinearizedSystem, probe: ProbeSpec):
    """Output amplitudes (eps_L_out, eps_R_out) at the probe frequency.

    Input-output relation with input fields eps / sqrt(kappa) on each port.
    """
    amp = response_amplitudes(lin, probe)
    rk = math.sqrt(lin.kappa)
    return rk * amp.c1_plus - probe.eps_L / rk, rk * amp.c2_plus - probe.eps_R / rk


def scattering_point(lin: LinearizedSystem, x: float) -> ScatteringPoint:
    """Transmission coefficients for one-sided driving at detuning ``x``.

    ``t_LR`` is the right output over the left input with the right port
    undriven; ``t_RL`` is the mirror quantity.
    """
    D, gx, _ = _denominator(lin, x)
    G2 = lin.G * lin.G
    w = 1j * lin.J * gx
    t_lr = 4.0 * lin.kappa * (2.0 * G2 * cmath.exp(1j * lin.theta) - w) / D
    t_rl = 4.0 * lin.kappa * (2.0 * G2 * cmath.exp(-1j * lin.theta) - w) / D
    return ScatteringPoint.from_coefficients(x, t_lr, t_rl)


def detuning_grid(x_min: float, x_max: float, n_points: int) -> np.ndarray:
    if int(n_points) != n_points or n_points < 2:
        raise BadGrid(f"n_points must be an integer >= 2, got {n_points!r}")
    if not (math.isfinite(x_min) and math.isfinite(x_max)) or not x_min < x_max:
        raise BadGrid(f"need finite x_min < x_max, got [{x_min}, {x_max}]")
    return np.linspace(float(x_min), float(x_max), int(n_points))


def sweep_arrays(lin: LinearizedSystem, xs) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized transmission over an ascending detuning array.

    Returns ``(xs, t_LR, t_RL)``.
    """
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    t_lr, t_rl, absd = kernels.transmission_grid(lin.G, lin.theta, lin.J, lin.kappa, lin.gamma, xs)
    bad = ~(absd > SINGULAR_THRESHOLD)
    if bad.any():
        k = int(np.argmax(bad))
        raise SingularDenominator(f"|D(x={xs[k]})| = {absd[k]:.3e} is below {SINGULAR_THRESHOLD}")
    return xs, t_lr, t_rl


def sweep(lin: LinearizedSystem, x_min: float, x_max: float, n_points: int) -> list[ScatteringPoint]:
    """Scattering points on ``n_points`` evenly spaced detunings, endpoints included."""
    xs, t_lr, t_rl = sweep_arrays(lin, detuning_grid(x_min, x_max, n_points))
    return [ScatteringPoint(float(x), complex(a), complex(b), float(abs(a)), float(abs(b)))
            for x, a, b in zip(xs, t_lr, t_rl)]


def _magnitudes(points, direction: str):
    if direction not in ("LR", "RL"):
        raise ValueError(f"direction must be 'LR' or 'RL', got {direction!r}")
    xs = np.array([p.x for p in points], dtype=np.float64)
    attr = "T_LR" if direction == "LR" else "T_RL"
    return xs, np.array([getattr(p, attr) for p in points], dtype=np.float64)


def half_max_crossings(xs, T) -> tuple[float, float]:
    """Interpolated detunings where ``T`` falls to half its global maximum.

    The crossings nearest to the maximum on each side are returned.

    Raises
    ------
    NotFound
        If the curve does not fall below half its maximum on both sides.
    """
    xs = np.asarray(xs, dtype=np.float64)
    T = np.asarray(T, dtype=np.float64)
    k = int(np.argmax(T))
    half = 0.5 * T[k]
    left = np.nonzero(T[:k] < half)[0]
    right = np.nonzero(T[k + 1:] < half)[0]
    if left.size == 0 or right.size == 0:
        raise NotFound("half maximum is not bracketed inside the grid")
    i = left[-1]
    j = k + 1 + right[0]
    x_left = xs[i] + (half - T[i]) * (xs[i + 1] - xs[i]) / (T[i + 1] - T[i])
    x_right = xs[j - 1] + (half - T[j - 1]) * (xs[j] - xs[j - 1]) / (T[j] - T[j - 1])
    return float(x_left), float(x_right)


def fwhm_arrays(xs, T) -> float:
    """Linearly interpolated full width at half maximum of a sampled peak."""
    x_left, x_right = half_max_crossings(xs, T)
    return x_right - x_left


def fwhm(points: Sequence[ScatteringPoint], direction: str = "LR") -> float:
    """FWHM of the ``T_LR`` (``direction="LR"``) or ``T_RL`` curve of a sweep."""
    xs, T = _magnitudes(points, direction)
    return fwhm_arrays(xs, T)
