#!/usr/bin/env python3
"""Time the hot numerical kernels on both backends.

Runs the compiled (Cython) and numpy implementations of the three kernels on
representative workloads, reports best-of-N wall times and the speedup, and
cross-checks that the two backends agree.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import math
import time

import numpy as np

from delaydesign import _purepy

try:
    from delaydesign import _core
except ImportError:
    _core = None

OMEGA = 2.0 * math.pi
P_OSC = np.array([OMEGA**2, 0.0, 1.0])  # s^2 + omega^2, ascending
Q_OSC = np.array([-33.813186774634758])
TAU = 0.12


def _best_of(fn, repeats):
    best = math.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workload_logderiv(rng):
    pts = rng.uniform(-30, 30, 4096) + 1j * rng.uniform(-30, 30, 4096)

    def run(mod):
        return mod.logderiv_batch(P_OSC, Q_OSC, TAU, pts)

    def close(a, b):
        ok = np.isfinite(a[0]) & np.isfinite(b[0])
        return bool(
            np.array_equal(np.isfinite(a[0]), np.isfinite(b[0]))
            and np.allclose(a[0][ok], b[0][ok], rtol=1e-12)
            and np.allclose(a[1][ok], b[1][ok], rtol=1e-12)
        )

    return "logderiv_batch (4096 pts)", run, close


def workload_grid(rng):
    taus = np.linspace(0.01, 3.0, 200)
    s0s = np.linspace(-10.0, 0.0, 200)
    p = np.array([1.0, 1.0, 1.0])  # s^2 + s + 1

    def run(mod):
        return mod.admissibility_grid(p, 1, taus, s0s)

    def close(a, b):
        ok = np.isfinite(a[0])
        return bool(
            np.array_equal(ok, np.isfinite(b[0]))
            and np.allclose(a[0][ok], b[0][ok], rtol=1e-12)
            and np.allclose(a[1][ok], b[1][ok], rtol=1e-12)
        )

    return "admissibility_grid (200x200)", run, close


def workload_euler(rng):
    a = [OMEGA**2, 0.0]
    b = [-33.813186774634758]
    D = 1000
    M = D + 200_000
    h = TAU / D

    def run(mod):
        hist = np.zeros((1, M + 1))
        hist[0, : D + 1] = 1.0
        stop = mod.euler_run(a, b, h, D, hist, [1.0, 0.0], False)
        assert stop == -1
        return hist[0]

    def close(ya, yb):
        return bool(np.array_equal(ya, yb))  # bit-identical by design

    return "euler_run (200k steps)", run, close


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(7)
    rows = []
    for mk in (workload_logderiv, workload_grid, workload_euler):
        name, run, close = mk(rng)
        t_py, out_py = _best_of(lambda: run(_purepy), args.repeats)
        if _core is None:
            rows.append((name, t_py, None, None))
            continue
        t_c, out_c = _best_of(lambda: run(_core), args.repeats)
        rows.append((name, t_py, t_c, close(out_c, out_py)))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}  agree")
    for name, t_py, t_c, agree in rows:
        if t_c is None:
            print(f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {'n/a':>10}  {'n/a':>8}  n/a")
        else:
            print(
                f"{name:<{width}}  {t_py * 1e3:>8.2f}ms  {t_c * 1e3:>8.2f}ms"
                f"  {t_py / t_c:>7.1f}x  {agree}"
            )
    if _core is None:
        print("\ncompiled extension not importable; only the numpy backend was timed")


if __name__ == "__main__":
    main()
