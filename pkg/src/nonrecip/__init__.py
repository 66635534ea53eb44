"""Optical nonreciprocity in a double-cavity optomechanical system.

Mean-field steady states, closed-form probe transmission, analytic
conditions for perfect nonreciprocity and independent numerical oracles.
"""
__version__ = "0.1.0"

from ._accel import USE_NUMBA, backend_name
from .conditions import (
    Branch,
    ConditionSet,
    Direction,
    GridReport,
    isolation_direction,
    perfect_conditions,
    required_coupling_J,
    verify_condition_by_grid,
)
from .model import (
    GeneralLinearizedSystem,
    LinearizedSystem,
    ProbeSpec,
    SteadyState,
    SystemParams,
    linearized_from_steady,
    make_system_params,
    wrap_phase,
)
from .response import (
    ResponseAmplitudes,
    ScatteringPoint,
    fwhm,
    half_max_crossings,
    output_fields,
    response_amplitudes,
    scattering_point,
    sweep,
    sweep_arrays,
)
from .steady_state import drives_for_target, solve_steady_state, steady_residual
from .oracle import (
    TimeSeries,
    demodulate,
    integrate_full,
    integrate_rwa,
    linsolve_response,
)

__all__ = [
    "Branch",
    "ConditionSet",
    "Direction",
    "GeneralLinearizedSystem",
    "GridReport",
    "LinearizedSystem",
    "ProbeSpec",
    "ResponseAmplitudes",
    "ScatteringPoint",
    "SteadyState",
    "SystemParams",
    "TimeSeries",
    "USE_NUMBA",
    "backend_name",
    "demodulate",
    "drives_for_target",
    "fwhm",
    "half_max_crossings",
    "integrate_full",
    "integrate_rwa",
    "isolation_direction",
    "linearized_from_steady",
    "linsolve_response",
    "make_system_params",
    "output_fields",
    "perfect_conditions",
    "required_coupling_J",
    "response_amplitudes",
    "scattering_point",
    "solve_steady_state",
    "steady_residual",
    "sweep",
    "sweep_arrays",
    "verify_condition_by_grid",
    "wrap_phase",
]
