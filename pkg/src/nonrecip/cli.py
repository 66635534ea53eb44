"""Command-line entry point: ``nonrecip {sweep,conditions,figure,oracle,steady}``.

Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .conditions import perfect_conditions
from .config import (
    ConfigError,
    RunConfig,
    build_config,
    complex_pair,
    load_json,
    parse_angle,
    parse_complex,
    parse_real,
)
from .errors import NonrecipError, NotFound, NumericalError, ParameterError
from .model import LinearizedSystem, ProbeSpec, linearized_from_steady, make_system_params
from .oracle import (
    full_transmission,
    general_transmission,
    integrate_full,
    integrate_rwa,
    default_rwa_timing,
    pair_deviation,
    rwa_transmission,
    slowest_decay_rate,
    demodulate,
    full_drive_frequencies,
)
from .response import detuning_grid, fwhm_arrays, response_amplitudes, scattering_point, sweep_arrays
from .steady_state import drives_for_target, solve_steady_state, steady_residual

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

SWEEP_HEADER = ("x", "T_LR", "T_RL", "re_tLR", "im_tLR", "re_tRL", "im_tRL")
FIG3_HEADER = ("theta", "G_over_gamma", "x_over_gamma")

FIG2_RATIOS = {"fig2a": 2.0, "fig2b": 1.0, "fig2c": 0.2, "fig2d": 0.01}
FIG4_THETAS = {"fig4a": "-3pi/4", "fig4b": "-pi/4", "fig4c": "pi/4", "fig4d": "3pi/4"}
FIGURES = tuple(FIG2_RATIOS) + ("fig3",) + tuple(FIG4_THETAS)

# flags whose values may legitimately start with "-" (e.g. "-pi/2")
_ANGLE_FLAGS = ("--theta",)


class SolverFailure(Exception):
    """Wraps a failure in a numerical stage so it maps to exit code 3."""


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _log(args, msg):
    if not getattr(args, "quiet", False):
        print(msg, file=sys.stderr)


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# sweep


def write_sweep_csv(path, xs, t_lr, t_rl) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_HEADER)
        for x, a, b in zip(xs, t_lr, t_rl):
            w.writerow([_fmt(x), _fmt(abs(a)), _fmt(abs(b)),
                        _fmt(a.real), _fmt(a.imag), _fmt(b.real), _fmt(b.imag)])


def read_sweep_csv(path):
    """Columns of a sweep CSV as float arrays keyed by header name."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {k: np.array([float(r[k]) for r in rows]) for k in SWEEP_HEADER}


def sweep_summary(xs, T_lr, T_rl) -> dict:
    """Peak value, its location and FWHM for both transmission curves."""
    out = {"n_points": int(len(xs))}
    for name, T in (("T_LR", T_lr), ("T_RL", T_rl)):
        k = int(np.argmax(T))
        try:
            width = fwhm_arrays(xs, T)
        except NotFound:
            width = None
        out[name] = {"max": float(T[k]), "argmax_x": float(xs[k]), "fwhm": width}
    return out


def _resolve_linearized(cfg: RunConfig) -> LinearizedSystem:
    if cfg.mode == "linearized":
        return cfg.linearized
    try:
        steady = solve_steady_state(cfg.physical)
        return linearized_from_steady(cfg.physical, steady)
    except NonrecipError as exc:
        raise SolverFailure(f"steady-state reduction failed: {exc}") from exc


def _linear_overrides(args, raw):
    flags = {k: getattr(args, k, None) for k in ("kappa", "gamma", "G", "J", "theta")}
    if any(v is not None for v in flags.values()):
        if raw.get("mode") == "selfconsistent" or "physical" in raw:
            raise ConfigError("linearized flags cannot override a physical configuration")
        block = dict(raw.get("linearized", {}))
        block.update({k: v for k, v in flags.items() if v is not None})
        raw["linearized"] = block
        raw.setdefault("mode", "linearized")


def cmd_sweep(args) -> int:
    raw = load_json(args.config) if args.config else {}
    _linear_overrides(args, raw)
    grid_flags = {"x_min": args.x_min, "x_max": args.x_max, "n_points": args.n_points}
    if any(v is not None for v in grid_flags.values()):
        grid = dict(raw.get("grid", {}))
        grid.update({k: v for k, v in grid_flags.items() if v is not None})
        raw["grid"] = grid
    cfg = build_config(raw, require_grid=True)
    out = args.out or cfg.output or "sweep.csv"
    lin = _resolve_linearized(cfg)
    try:
        xs, t_lr, t_rl = sweep_arrays(lin, detuning_grid(cfg.grid.x_min, cfg.grid.x_max, cfg.grid.n_points))
    except NumericalError as exc:
        raise SolverFailure(str(exc)) from exc
    write_sweep_csv(out, xs, t_lr, t_rl)
    # summary from the serialized values so that it is reproducible from the file
    cols = read_sweep_csv(out)
    summary = sweep_summary(cols["x"], cols["T_LR"], cols["T_RL"])
    summary["output"] = str(out)
    summary["linearized"] = {"kappa": lin.kappa, "gamma": lin.gamma, "G": lin.G, "J": lin.J,
                             "theta": lin.theta}
    _log(args, f"wrote {len(xs)} rows to {out}")
    _emit(summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# conditions


def cmd_conditions(args) -> int:
    raw = load_json(args.config) if args.config else {}
    block = raw.get("linearized", raw)
    kappa = args.kappa if args.kappa is not None else block.get("kappa")
    gamma = args.gamma if args.gamma is not None else block.get("gamma")
    theta = args.theta if args.theta is not None else block.get("theta")
    if kappa is None or gamma is None or theta is None:
        raise ConfigError("conditions needs kappa, gamma and theta")
    kappa = parse_real(kappa, "kappa")
    gamma = parse_real(gamma, "gamma")
    theta = parse_angle(theta)
    if not (kappa > 0 and gamma > 0):
        raise ConfigError("kappa and gamma must be > 0")
    cond = perfect_conditions(kappa, gamma, theta)
    _emit(cond.as_dict() if cond is not None else {"result": "none"})
    return EXIT_OK


# ---------------------------------------------------------------------------
# figure


def figure_system(fig_id: str) -> LinearizedSystem:
    """Parameters of a transmission figure (kappa = 1 for fig2*, gamma = 1 for fig4*)."""
    if fig_id in FIG2_RATIOS:
        r = FIG2_RATIOS[fig_id]
        return LinearizedSystem(G=0.5 * math.sqrt(r), theta=-0.5 * math.pi, J=0.5, kappa=1.0, gamma=r)
    if fig_id in FIG4_THETAS:
        theta = parse_angle(FIG4_THETAS[fig_id])
        cond = perfect_conditions(1.0, 1.0, theta)
        return LinearizedSystem(G=cond.G_star, theta=theta, J=cond.J_star, kappa=1.0, gamma=1.0)
    raise ConfigError(f"{fig_id} is not a transmission figure")


def figure_grid(fig_id: str) -> np.ndarray:
    if fig_id in FIG2_RATIOS:
        return detuning_grid(-2.0, 2.0, 2001)
    return detuning_grid(-5.0, 5.0, 1001)


def fig3_rows():
    """(theta, G/gamma, x/gamma) of the equal-damping condition, poles excluded."""
    rows = []
    for k in range(-359, 360):
        if k == 0:
            continue
        theta = math.pi * (k / 360.0)
        cond = perfect_conditions(1.0, 1.0, theta)
        rows.append((theta, cond.G_star, cond.x_star))
    return rows


def write_figure(fig_id: str, path) -> None:
    if fig_id == "fig3":
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(FIG3_HEADER)
            for row in fig3_rows():
                w.writerow([_fmt(v) for v in row])
        return
    xs, t_lr, t_rl = sweep_arrays(figure_system(fig_id), figure_grid(fig_id))
    write_sweep_csv(path, xs, t_lr, t_rl)


def cmd_figure(args) -> int:
    ids = FIGURES if args.id == "all" else (args.id,)
    if args.id == "all":
        outdir = Path(args.out or ".")
        outdir.mkdir(parents=True, exist_ok=True)
        targets = [(f, outdir / f"{f}.csv") for f in ids]
    else:
        out = Path(args.out) if args.out else Path(f"{args.id}.csv")
        if out.is_dir():
            out = out / f"{args.id}.csv"
        targets = [(args.id, out)]
    for fig_id, path in targets:
        write_figure(fig_id, path)
        _log(args, f"wrote {fig_id} to {path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle


def _pair(t):
    return {"t_LR": complex_pair(t[0]), "t_RL": complex_pair(t[1])}


def _amplitudes(arr):
    return {"c1_plus": complex_pair(complex(arr[0])), "c2_plus": complex_pair(complex(arr[1])),
            "b_plus": complex_pair(complex(arr[2]))}


def _physical_for_scan(lin: LinearizedSystem, omega_m: float, g0: float):
    eps_c, eps_d = drives_for_target(lin.G, lin.theta, lin.J, lin.kappa, lin.kappa, g0, omega_m, omega_m)
    params = make_system_params(lin.kappa, lin.kappa, lin.gamma, omega_m, g0, lin.J, omega_m, eps_c, eps_d)
    return params, solve_steady_state(params)


def run_oracle(cfg: RunConfig) -> dict:
    """Closed form, linear solve and time-domain transmissions at one detuning."""
    opts = cfg.oracle
    x = parse_real(opts.get("x", 0.0), "oracle.x")
    probe = ProbeSpec(parse_complex(opts.get("eps_L", 1.0)), parse_complex(opts.get("eps_R", 0.0)), x)
    steady = None
    if cfg.mode == "selfconsistent":
        steady = solve_steady_state(cfg.physical)
        lin = linearized_from_steady(cfg.physical, steady)
    else:
        lin = cfg.linearized

    closed = scattering_point(lin, x)
    t_closed = (closed.t_LR, closed.t_RL)
    t_lin = general_transmission(lin, x)
    report = {
        "x": x,
        "linearized": {"kappa": lin.kappa, "gamma": lin.gamma, "G": lin.G, "J": lin.J, "theta": lin.theta},
        "closed_form": {**_pair(t_closed), "amplitudes": _amplitudes(response_amplitudes(lin, probe).as_array())},
        "linsolve": _pair(t_lin),
    }
    results = {"closed_form": t_closed, "linsolve": t_lin}

    if opts.get("rwa", True):
        auto_end, auto_dt = default_rwa_timing(lin, x)
        t_end = opts.get("t_end") or auto_end
        dt = opts.get("dt") or auto_dt
        t_rwa = rwa_transmission(lin, x, t_end, dt)
        stride = max(1, int(round(t_end / dt)) // 200_000)
        ts = integrate_rwa(lin, probe, t_end, dt, stride)
        report["timedomain_rwa"] = {**_pair(t_rwa), "amplitudes": _amplitudes(demodulate(ts, x)[:, 0])}
        results["timedomain_rwa"] = t_rwa

    if opts.get("full", False):
        if cfg.mode != "selfconsistent":
            raise ConfigError("full-equation oracle needs a physical configuration")
        t_end = opts.get("t_end") or 20.0 / slowest_decay_rate(lin)
        t_full = full_transmission(cfg.physical, steady, x, t_end)
        fast = max(cfg.physical.omega_m, abs(steady.delta1), abs(steady.delta2))
        ts = integrate_full(cfg.physical, steady, probe, t_end, 0.01 / fast)
        amps = demodulate(ts, full_drive_frequencies(cfg.physical, steady, x))[:, 0]
        report["timedomain_full"] = {**_pair(t_full), "amplitudes": _amplitudes(amps)}
        results["timedomain_full"] = t_full

    names = list(results)
    report["deviations"] = {
        f"{a}~{b}": pair_deviation(results[a], results[b])
        for i, a in enumerate(names) for b in names[i + 1:]
    }

    scan = opts.get("omega_m_scan")
    if scan:
        g0 = parse_real(opts.get("g0", 1e-3), "oracle.g0")
        t_end = opts.get("t_end") or 20.0 / slowest_decay_rate(lin)
        rows = []
        for factor in scan:
            omega_m = parse_real(factor, "omega_m_scan") * lin.kappa
            params, st = _physical_for_scan(lin, omega_m, g0)
            lin_m = linearized_from_steady(params, st)
            t_full = full_transmission(params, st, x, t_end)
            t_rwa = rwa_transmission(lin_m, x, t_end, default_rwa_timing(lin_m, x)[1])
            rows.append({"omega_m": omega_m, "deviation": pair_deviation(t_full, t_rwa)})
        report["omega_m_scan"] = rows
    return report


def cmd_oracle(args) -> int:
    raw = load_json(args.config) if args.config else {}
    _linear_overrides(args, raw)
    cfg = build_config(raw)
    opts = dict(cfg.oracle)
    for key in ("x", "t_end", "dt"):
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    if args.full:
        opts["full"] = True
    if args.no_rwa:
        opts["rwa"] = False
    if args.omega_m_scan:
        opts["omega_m_scan"] = args.omega_m_scan
    cfg = RunConfig(cfg.mode, cfg.linearized, cfg.physical, cfg.grid, cfg.output, opts)
    try:
        report = run_oracle(cfg)
    except ConfigError:
        raise
    except NonrecipError as exc:
        raise SolverFailure(str(exc)) from exc
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    _emit(report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# steady


def cmd_steady(args) -> int:
    raw = load_json(args.config) if args.config else {}
    block = dict(raw.get("physical", {}))
    for key in ("kappa1", "kappa2", "gamma", "omega_m", "g0", "J", "delta_c", "eps_c", "eps_d"):
        val = getattr(args, key, None)
        if val is not None:
            block[key] = val
    cfg = build_config({"mode": "selfconsistent", "physical": block})
    if not 0.0 < args.relax <= 1.0:
        raise ConfigError(f"--relax must lie in (0, 1], got {args.relax}")
    try:
        st = solve_steady_state(cfg.physical, relax=args.relax)
    except NonrecipError as exc:
        raise SolverFailure(str(exc)) from exc
    report = {
        "b_s": complex_pair(st.b_s),
        "c1_s": complex_pair(st.c1_s),
        "c2_s": complex_pair(st.c2_s),
        "delta1": st.delta1,
        "delta2": st.delta2,
        "residual": steady_residual(cfg.physical, st),
    }
    try:
        lin = linearized_from_steady(cfg.physical, st)
        report["linearized"] = {"G": lin.G, "theta": lin.theta, "J": lin.J, "kappa": lin.kappa,
                                "gamma": lin.gamma}
    except ParameterError as exc:
        report["linearized"] = None
        report["linearized_error"] = str(exc)
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    _emit(report)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _common(p):
    p.add_argument("--config", metavar="PATH", help="JSON run configuration")
    p.add_argument("--out", metavar="PATH", help="output file")
    p.add_argument("--quiet", action="store_true", help="suppress progress messages")


def _linear_flags(p):
    p.add_argument("--kappa", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--G", type=float)
    p.add_argument("--J", type=float)
    p.add_argument("--theta", help="radians or a multiple of pi, e.g. -pi/2")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonrecip", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="transmission spectra over a detuning grid")
    _common(p)
    _linear_flags(p)
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--n-points", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("conditions", help="perfect-nonreciprocity conditions")
    _common(p)
    p.add_argument("--kappa", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--theta", help="radians or a multiple of pi, e.g. pi/4")
    p.set_defaults(func=cmd_conditions)

    p = sub.add_parser("figure", help="data behind the published figures")
    _common(p)
    p.add_argument("id", choices=FIGURES + ("all",))
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("oracle", help="cross-check closed form against numerical oracles")
    _common(p)
    _linear_flags(p)
    p.add_argument("--x", type=float)
    p.add_argument("--t-end", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--full", action="store_true", help="also integrate with counter-rotating terms")
    p.add_argument("--no-rwa", action="store_true", help="skip the rotating-wave time integration")
    p.add_argument("--omega-m-scan", type=float, nargs="+", metavar="FACTOR",
                   help="mechanical frequencies (in units of kappa) for the RWA-validity scan")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("steady", help="self-consistent mean-field steady state")
    _common(p)
    for key in ("kappa1", "kappa2", "gamma", "omega_m", "g0", "J", "delta_c"):
        p.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float)
    p.add_argument("--eps-c", dest="eps_c", help="complex, e.g. 200 or 200j or 1+2j")
    p.add_argument("--eps-d", dest="eps_d", help="complex, e.g. 200 or 200j or 1+2j")
    p.add_argument("--relax", type=float, default=0.5, help="fixed-point damping factor")
    p.set_defaults(func=cmd_steady)
    return parser


def _join_angle_values(argv):
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _ANGLE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_join_angle_values(argv))
    try:
        return args.func(args)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverFailure, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
