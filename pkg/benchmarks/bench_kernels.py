"""Compare the numba and numpy backends of the hot kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Prints one line per kernel with the best-of-N wall time for each backend
and checks that both backends agree.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from locusmith import _kernels
from locusmith.asymptotics import cubic_coefficients
from locusmith.jet import random_jet


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba not installed; nothing to compare")
        return

    rng = np.random.default_rng(7)
    jet = random_jet(rng, 3, 5, 1)
    coeffs = cubic_coefficients(jet)
    grid = _kernels.sphere_grid(720, 360)
    flat = grid.reshape(-1, 3)
    values = _kernels.cubic_eval(coeffs, flat, "numpy").reshape(grid.shape[:2])
    tol = 1e-12 * np.max(np.abs(coeffs))
    edges, _ = _kernels.sign_change_edges(values, tol, "numpy")
    p0 = grid[edges[:, 0], edges[:, 1]]
    p1 = grid[edges[:, 2], edges[:, 3]]
    dirs = rng.normal(size=(200_000, 3))

    cases = {
        "quadratic_map (2e5 dirs)": lambda b: _kernels.quadratic_map(jet.hessians, dirs, b),
        "cubic_eval (720x361 grid)": lambda b: _kernels.cubic_eval(coeffs, flat, b),
        "sign_change_edges": lambda b: _kernels.sign_change_edges(values, tol, b),
        f"bisect_arcs ({len(p0)} arcs)": lambda b: _kernels.bisect_arcs(coeffs, p0, p1, tol, backend=b),
    }
    print(f"{'kernel':32s} {'numpy [ms]':>11s} {'numba [ms]':>11s} {'speedup':>8s}  agree")
    for name, fn in cases.items():
        fn("numba")  # compile outside the timing
        r_np, r_nb = fn("numpy"), fn("numba")
        if isinstance(r_np, tuple):
            agree = all(np.allclose(a, b, atol=1e-12) for a, b in zip(r_np, r_nb))
        else:
            agree = np.allclose(r_np, r_nb, atol=1e-12)
        t_np = best_of(lambda: fn("numpy"), args.repeat)
        t_nb = best_of(lambda: fn("numba"), args.repeat)
        print(f"{name:32s} {1e3 * t_np:11.2f} {1e3 * t_nb:11.2f} {t_np / t_nb:8.1f}  {agree}")


if __name__ == "__main__":
    main()
