"""Wall-clock comparison of the numba and numpy kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N] [--json]

Each kernel is called once to trigger compilation (not timed), then the best
of ``--repeat`` runs is reported.
"""
import argparse
import json
import time

import numpy as np

from nonrecip import _accel, kernels


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    xs = np.linspace(-5, 5, 200_001)
    grid = (0.7, -1.2, 0.5, 1.0, 0.3)
    Js = np.linspace(0.1, 1.0, 41)
    Gs = np.linspace(0.1, 1.0, 41)
    xo = np.linspace(-2, 2, 41)
    M = np.array([[-0.5, -0.5j, 0.5j], [-0.5j, -0.5, 0.5], [0.5j, 0.5, -0.5]], dtype=np.complex128)
    f = np.array([1.0, 0.0, 0.0], dtype=np.complex128)
    full = (1.0, 1.0, 1.0, 50.0, 50.0, 50.0, 0.5, -0.5j, 0.5, 1.0, 0.0, 50.3, 2e-4, 50_000, 1)
    yield ("transmission_grid (2e5 x)",
           lambda: kernels.transmission_grid_numpy(*grid, xs),
           lambda: kernels.transmission_grid_numba(*grid, xs))
    yield ("nonreciprocity_objective (41^3)",
           lambda: kernels.nonreciprocity_objective_numpy(Js, Gs, xo, 1.0, 1.0, -np.pi / 2, True),
           lambda: kernels.nonreciprocity_objective_numba(Js, Gs, xo, 1.0, 1.0, -np.pi / 2, True))
    yield ("rk4_linear (1e5 steps)",
           lambda: kernels.rk4_linear_numpy(M, f, 0.3, 1e-3, 100_000, 1),
           lambda: kernels.rk4_linear_numba(M, f, 0.3, 1e-3, 100_000, 1))
    yield ("rk4_full (5e4 steps)",
           lambda: kernels.rk4_full_numpy(*full),
           lambda: kernels.rk4_full_numba(*full))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true", help="print results as JSON")
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rows = []
    for name, np_fn, nb_fn in cases():
        t_np = best_of(np_fn, args.repeat)
        t_nb = best_of(nb_fn, args.repeat)
        rows.append({"kernel": name, "numpy_s": t_np, "numba_s": t_nb, "speedup": t_np / t_nb})
    if args.json:
        print(json.dumps(rows, indent=2))
        return
    print(f"{'kernel':34s} {'numpy [s]':>11s} {'numba [s]':>11s} {'speedup':>9s}")
    for r in rows:
        print(f"{r['kernel']:34s} {r['numpy_s']:11.4f} {r['numba_s']:11.4f} {r['speedup']:8.1f}x")


if __name__ == "__main__":
    main()
