"""Independent numerical checks of the closed-form response.

Three routes that share no algebra with :mod:`nonrecip.response`:

* a dense 3x3 linear solve of the rotating-wave equations for arbitrary
  (kappa1, kappa2, complex G1c, complex G2c);
* fixed-step RK4 integration of the rotating-wave equations in time;
* fixed-step RK4 integration of the linearized equations *with* the
  counter-rotating terms, which the rotating-wave model drops.

Time series are reduced to complex amplitudes by a least-squares fit to the
two tones exp(-ixt) and exp(+ixt).
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import SingularMatrix, SpanTooShort, StepTooLarge, WindowTooShort
from .model import GeneralLinearizedSystem, LinearizedSystem, ProbeSpec, SteadyState, SystemParams
from .response import ResponseAmplitudes

COND_LIMIT = 1e12
RWA_STEP_FACTOR = 0.05
FULL_STEP_FACTOR = 0.02
MIN_WINDOW = 16

CSV_HEADER = ("t", "re_c1", "im_c1", "re_c2", "im_c2", "re_b", "im_b")


@dataclass(frozen=True)
class TimeSeries:
    """Uniformly sampled trajectory; ``samples[:, k]`` holds (c1, c2, b)."""

    t0: float
    dt: float
    samples: np.ndarray

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        s = np.asarray(self.samples)
        if s.ndim != 2 or s.shape[1] != 3 or s.shape[0] < 2:
            raise ValueError(f"samples must have shape (n >= 2, 3), got {s.shape}")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.shape[0])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_HEADER)
            for t, row in zip(self.times, self.samples):
                w.writerow([f"{v:.17g}" for v in (t, row[0].real, row[0].imag,
                                                   row[1].real, row[1].imag,
                                                   row[2].real, row[2].imag)])


def _as_general(sys) -> GeneralLinearizedSystem:
    if isinstance(sys, LinearizedSystem):
        return GeneralLinearizedSystem.from_linearized(sys)
    return sys


def drift_matrix(sys) -> np.ndarray:
    """Matrix M of the rotating-wave equations d(c1, c2, b)/dt = M (c1, c2, b) + drive."""
    s = _as_general(sys)
    return np.array(
        [
            [-0.5 * s.kappa1, -1j * s.J, 1j * s.G1c],
            [-1j * s.J, -0.5 * s.kappa2, -1j * s.G2c],
            [1j * np.conj(s.G1c), -1j * np.conj(s.G2c), -0.5 * s.gamma],
        ],
        dtype=np.complex128,
    )


def slowest_decay_rate(sys) -> float:
    """Smallest decay rate among the normal modes of the rotating-wave model."""
    return float(-np.max(np.linalg.eigvals(drift_matrix(sys)).real))


def linsolve_response(sys, probe: ProbeSpec) -> ResponseAmplitudes:
    """Steady e^{-ixt} response from a dense linear solve.

    Accepts a :class:`GeneralLinearizedSystem` or a :class:`LinearizedSystem`.

    Raises
    ------
    SingularMatrix
        If the condition number of (M + i x I) exceeds 1e12.
    """
    A = -(drift_matrix(sys) + 1j * probe.x * np.eye(3))
    if not np.linalg.cond(A) < COND_LIMIT:
        raise SingularMatrix(f"system matrix is ill-conditioned at x={probe.x}")
    c1, c2, b = np.linalg.solve(A, np.array([probe.eps_L, probe.eps_R, 0.0], dtype=np.complex128))
    return ResponseAmplitudes(b_plus=complex(b), c1_plus=complex(c1), c2_plus=complex(c2))


def general_transmission(sys, x: float) -> tuple[complex, complex]:
    """(t_LR, t_RL) of the general model; port k has input eps / sqrt(kappa_k)."""
    s = _as_general(sys)
    scale = math.sqrt(s.kappa1 * s.kappa2)
    from_left = linsolve_response(s, ProbeSpec(1.0, 0.0, x))
    from_right = linsolve_response(s, ProbeSpec(0.0, 1.0, x))
    return scale * from_left.c2_plus, scale * from_right.c1_plus


def _n_steps(t_end, dt):
    n = int(round(t_end / dt))
    if n < 1:
        raise SpanTooShort(f"t_end={t_end} shorter than one step dt={dt}")
    return n


def integrate_rwa(sys, probe: ProbeSpec, t_end: float, dt: float, stride: int = 1) -> TimeSeries:
    """RK4 integration of the rotating-wave equations from rest.

    Parameters
    ----------
    sys : LinearizedSystem or GeneralLinearizedSystem
    probe : ProbeSpec
    t_end : float
        Must be at least 10 / min(kappa, gamma) so transients can decay.
    dt : float
        Must be at most 0.05 / max(kappa, gamma, |G|, J, |x|).
    stride : int, optional
        Keep every ``stride``-th step.

    Raises
    ------
    StepTooLarge, SpanTooShort
    """
    s = _as_general(sys)
    fastest = max(s.kappa1, s.kappa2, s.gamma, abs(s.G1c), abs(s.G2c), s.J, abs(probe.x))
    if dt > RWA_STEP_FACTOR / fastest:
        raise StepTooLarge(f"dt={dt} exceeds {RWA_STEP_FACTOR}/{fastest}")
    slowest = min(s.kappa1, s.kappa2, s.gamma)
    if t_end < 10.0 / slowest:
        raise SpanTooShort(f"t_end={t_end} is below 10/{slowest}")
    n = _n_steps(t_end, dt)
    drive = np.array([probe.eps_L, probe.eps_R, 0.0], dtype=np.complex128)
    out = kernels.rk4_linear(drift_matrix(s), drive, probe.x, dt, n, stride)
    return TimeSeries(0.0, dt * stride, out)


def integrate_full(
    params: SystemParams,
    steady: SteadyState,
    probe: ProbeSpec,
    t_end: float,
    dt: float,
    stride: int = 1,
) -> TimeSeries:
    """RK4 integration of the linearized equations including counter-rotating terms.

    Fluctuations are expressed in the interaction picture that rotates c1, c2
    and b at delta1, delta2 and omega_m.  The probe detuning from the
    coupling fields is ``probe.x + omega_m``, so each cavity is driven at
    ``probe.x + omega_m - delta_k``.  The mechanical amplitude is reported in
    the gauge where ``g0 c1_s`` is real positive, matching
    :class:`LinearizedSystem`.

    Raises
    ------
    StepTooLarge
        If ``dt > 0.02 / omega_m`` or the slow rates are under-resolved.
    """
    fast = max(params.omega_m, abs(steady.delta1), abs(steady.delta2))
    if dt > FULL_STEP_FACTOR / fast:
        raise StepTooLarge(f"dt={dt} exceeds {FULL_STEP_FACTOR}/{fast}")
    K1 = params.g0 * steady.c1_s
    K2 = params.g0 * steady.c2_s
    slow = max(params.kappa1, params.kappa2, params.gamma, abs(K1), abs(K2), params.J, abs(probe.x))
    if dt > RWA_STEP_FACTOR / slow:
        raise StepTooLarge(f"dt={dt} exceeds {RWA_STEP_FACTOR}/{slow}")
    n = _n_steps(t_end, dt)
    out = kernels.rk4_full(
        params.kappa1, params.kappa2, params.gamma, params.omega_m, steady.delta1, steady.delta2,
        K1, K2, params.J, probe.eps_L, probe.eps_R, probe.x + params.omega_m, dt, n, stride,
    )
    if abs(steady.c1_s) > 0:
        # b' = b exp(i arg c1_s) makes the cavity-1 coupling real
        out[:, 2] *= steady.c1_s / abs(steady.c1_s)
    return TimeSeries(0.0, dt * stride, out)


def full_drive_frequencies(params: SystemParams, steady: SteadyState, x: float) -> np.ndarray:
    """Frequencies at which (c1, c2, b) respond in the frame of :func:`integrate_full`."""
    delta = x + params.omega_m
    return np.array([delta - steady.delta1, delta - steady.delta2, x])


def demodulate(ts: TimeSeries, x, window_fraction: float = 0.25) -> np.ndarray:
    """Least-squares two-tone amplitudes of each mode over a trailing window.

    Each mode is fitted to ``a exp(-i x t) + b exp(+i x t)``.  ``x`` may be a
    scalar or one frequency per mode.  At x = 0 the two tones coincide and
    only ``a`` is fitted (``b`` is reported as 0).

    Returns
    -------
    ndarray, shape (3, 2)
        Rows (c1, c2, b); columns (a, b).

    Raises
    ------
    WindowTooShort
        If the window holds fewer than 16 samples.
    """
    if not 0.0 < window_fraction < 1.0:
        raise ValueError(f"window_fraction must lie in (0, 1), got {window_fraction}")
    n = ts.samples.shape[0]
    m = int(math.floor(window_fraction * n))
    if m < MIN_WINDOW:
        raise WindowTooShort(f"window holds {m} samples, need at least {MIN_WINDOW}")
    t = ts.times[n - m:]
    data = ts.samples[n - m:]
    freqs = np.broadcast_to(np.asarray(x, dtype=np.float64), (3,))
    span = t[-1] - t[0]
    result = np.zeros((3, 2), dtype=np.complex128)
    for k in range(3):
        w = freqs[k]
        if abs(w) * span < 1e-9:
            result[k, 0] = np.vdot(np.exp(-1j * w * t), data[:, k]) / m
            continue
        basis = np.column_stack([np.exp(-1j * w * t), np.exp(1j * w * t)])
        coef, *_ = np.linalg.lstsq(basis, data[:, k], rcond=None)
        result[k] = coef
    return result


def default_rwa_timing(sys, x: float) -> tuple[float, float]:
    """(t_end, dt) for :func:`integrate_rwa`: 20 slowest-mode lifetimes, half the step limit."""
    s = _as_general(sys)
    gap = slowest_decay_rate(s)
    t_end = max(20.0 / gap, 10.0 / min(s.kappa1, s.kappa2, s.gamma))
    fastest = max(s.kappa1, s.kappa2, s.gamma, abs(s.G1c), abs(s.G2c), s.J, abs(x))
    return t_end, 0.5 * RWA_STEP_FACTOR / fastest


def rwa_transmission(sys, x: float, t_end=None, dt=None, max_samples: int = 200_000):
    """(t_LR, t_RL) from time-domain integration of the rotating-wave equations.

    Runs one trajectory per input port and demodulates the opposite cavity.
    """
    s = _as_general(sys)
    auto_end, auto_dt = default_rwa_timing(s, x)
    t_end = auto_end if t_end is None else t_end
    dt = auto_dt if dt is None else dt
    stride = max(1, int(round(t_end / dt)) // max_samples)
    scale = math.sqrt(s.kappa1 * s.kappa2)
    left = demodulate(integrate_rwa(s, ProbeSpec(1.0, 0.0, x), t_end, dt, stride), x)
    right = demodulate(integrate_rwa(s, ProbeSpec(0.0, 1.0, x), t_end, dt, stride), x)
    return complex(scale * left[1, 0]), complex(scale * right[0, 0])


def full_transmission(params: SystemParams, steady: SteadyState, x: float, t_end: float, dt=None):
    """(t_LR, t_RL) from the linearized equations with counter-rotating terms."""
    if dt is None:
        fast = max(params.omega_m, abs(steady.delta1), abs(steady.delta2))
        slow = max(params.kappa1, params.kappa2, params.gamma, params.g0 * abs(steady.c1_s),
                   params.g0 * abs(steady.c2_s), params.J, abs(x))
        dt = min(0.5 * FULL_STEP_FACTOR / fast, 0.5 * RWA_STEP_FACTOR / slow)
    freqs = full_drive_frequencies(params, steady, x)
    scale = math.sqrt(params.kappa1 * params.kappa2)
    left = demodulate(integrate_full(params, steady, ProbeSpec(1.0, 0.0, x), t_end, dt), freqs)
    right = demodulate(integrate_full(params, steady, ProbeSpec(0.0, 1.0, x), t_end, dt), freqs)
    return complex(scale * left[1, 0]), complex(scale * right[0, 0])


def pair_deviation(a, b) -> float:
    """Relative distance between two (t_LR, t_RL) pairs, normalized by the norm of ``b``."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    scale = np.linalg.norm(b)
    return float(np.linalg.norm(a - b) / scale) if scale > 0 else float(np.linalg.norm(a - b))
