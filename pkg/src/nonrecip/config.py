"""JSON run configuration and value parsing shared by the CLI commands."""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Any

from .errors import ParameterError
from .model import LinearizedSystem, SystemParams, make_system_params
from .response import detuning_grid


class ConfigError(ParameterError):
    pass


_ANGLE = re.compile(
    r"""^\s*(?P<sign>[+-]?)\s*
        (?P<coef>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?\s*\*?\s*
        pi\s*
        (/\s*(?P<den>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?))?\s*$""",
    re.VERBOSE | re.IGNORECASE,
)


def parse_angle(value) -> float:
    """Radians from a number or a symbolic multiple of pi.

    Accepts e.g. ``0.3``, ``"pi"``, ``"-pi/2"``, ``"3pi/4"``, ``"-3*pi/4"``,
    ``"0.25*pi"``.
    """
    if isinstance(value, bool):
        raise ConfigError(f"not an angle: {value!r}")
    if isinstance(value, (int, float)):
        out = float(value)
    else:
        text = str(value)
        m = _ANGLE.match(text)
        if m:
            coef = float(m.group("coef")) if m.group("coef") else 1.0
            den = float(m.group("den")) if m.group("den") else 1.0
            if den == 0:
                raise ConfigError(f"zero denominator in angle {text!r}")
            out = math.pi * (coef / den)
            if m.group("sign") == "-":
                out = -out
        else:
            try:
                out = float(text)
            except ValueError:
                raise ConfigError(f"cannot parse angle {text!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"angle must be finite, got {value!r}")
    return out


def parse_complex(value) -> complex:
    """Complex from a number, ``[re, im]``, ``{"re": .., "im": ..}`` or ``"1+2j"``."""
    try:
        if isinstance(value, bool):
            raise TypeError
        if isinstance(value, (int, float)):
            return complex(value)
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, dict):
            return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
        if isinstance(value, str):
            return complex(value.replace(" ", ""))
    except (TypeError, ValueError):
        pass
    raise ConfigError(f"cannot parse complex number {value!r}")


def parse_real(value, name) -> float:
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a number, got {value!r}")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: expected a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"{name}: must be finite")
    return out


def complex_pair(z: complex) -> list[float]:
    return [z.real, z.imag]


LINEAR_KEYS = ("kappa", "gamma", "G", "J", "theta")
PHYSICAL_KEYS = ("kappa1", "kappa2", "gamma", "omega_m", "g0", "J", "delta_c", "eps_c", "eps_d")


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    n_points: int


@dataclass(frozen=True)
class RunConfig:
    mode: str
    linearized: LinearizedSystem | None = None
    physical: SystemParams | None = None
    grid: Grid | None = None
    output: str | None = None
    oracle: dict[str, Any] = field(default_factory=dict)


def _block(raw, name, keys, required):
    block = raw.get(name)
    if not isinstance(block, dict):
        raise ConfigError(f"'{name}' block must be an object")
    unknown = set(block) - set(keys)
    if unknown:
        raise ConfigError(f"unknown keys in '{name}': {sorted(unknown)}")
    missing = [k for k in required if k not in block]
    if missing:
        raise ConfigError(f"missing keys in '{name}': {missing}")
    return block


def linearized_from_block(block) -> LinearizedSystem:
    return LinearizedSystem(
        G=parse_real(block["G"], "G"),
        theta=parse_angle(block["theta"]),
        J=parse_real(block["J"], "J"),
        kappa=parse_real(block["kappa"], "kappa"),
        gamma=parse_real(block["gamma"], "gamma"),
    )


def physical_from_block(block) -> SystemParams:
    return make_system_params(
        kappa1=parse_real(block["kappa1"], "kappa1"),
        kappa2=parse_real(block["kappa2"], "kappa2"),
        gamma=parse_real(block["gamma"], "gamma"),
        omega_m=parse_real(block["omega_m"], "omega_m"),
        g0=parse_real(block["g0"], "g0"),
        J=parse_real(block["J"], "J"),
        delta_c=parse_real(block["delta_c"], "delta_c"),
        eps_c=parse_complex(block.get("eps_c", 0.0)),
        eps_d=parse_complex(block.get("eps_d", 0.0)),
    )


def build_config(raw: dict, require_grid: bool = False) -> RunConfig:
    """Validate a decoded JSON document into a :class:`RunConfig`.

    Raises
    ------
    ConfigError
        On any structural or value problem (including invalid physics such
        as non-positive rates, which are re-raised as ConfigError).
    """
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    mode = raw.get("mode")
    if mode is None:
        mode = "selfconsistent" if "physical" in raw and "linearized" not in raw else "linearized"
    if mode not in ("linearized", "selfconsistent"):
        raise ConfigError(f"mode must be 'linearized' or 'selfconsistent', got {mode!r}")
    try:
        lin = phys = None
        if mode == "linearized":
            if "physical" in raw:
                raise ConfigError("linearized mode takes a 'linearized' block, not 'physical'")
            lin = linearized_from_block(_block(raw, "linearized", LINEAR_KEYS, LINEAR_KEYS))
        else:
            if "linearized" in raw and "physical" in raw:
                raise ConfigError("give exactly one of 'linearized' and 'physical'")
            phys = physical_from_block(
                _block(raw, "physical", PHYSICAL_KEYS, PHYSICAL_KEYS[:7])
            )
        grid = None
        if "grid" in raw:
            g = _block(raw, "grid", ("x_min", "x_max", "n_points"), ("x_min", "x_max", "n_points"))
            n = g["n_points"]
            if isinstance(n, bool) or not isinstance(n, int):
                raise ConfigError(f"grid.n_points must be an integer, got {n!r}")
            grid = Grid(parse_real(g["x_min"], "x_min"), parse_real(g["x_max"], "x_max"), n)
            detuning_grid(grid.x_min, grid.x_max, grid.n_points)
        elif require_grid:
            raise ConfigError("missing 'grid' block")
        oracle = raw.get("oracle", {})
        if not isinstance(oracle, dict):
            raise ConfigError("'oracle' block must be an object")
        output = raw.get("output")
        if output is not None and not isinstance(output, str):
            raise ConfigError("'output' must be a path string")
    except ConfigError:
        raise
    except ParameterError as exc:
        raise ConfigError(str(exc)) from exc
    return RunConfig(mode=mode, linearized=lin, physical=phys, grid=grid, output=output, oracle=oracle)


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
