"""Compare the compiled and NumPy RK4 kernels on the acceptance workload.

    python benchmarks/bench_rk4.py [--repeat 5] [--t-end 20] [--dt 1e-3]
"""
import argparse
import time

import numpy as np

from pu_oscillator import _kernels_py
from pu_oscillator.dynamics import decoupled_field, fourth_order_field, ghost_field
from pu_oscillator.model import validate_params

try:
    from pu_oscillator import _kernels as _compiled
except ImportError:
    _compiled = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--t-end", type=float, default=20.0)
    ap.add_argument("--dt", type=float, default=1e-3)
    args = ap.parse_args()

    p = validate_params(1.0, 2.0, 1.0)
    nsteps = int(round(args.t_end / args.dt))
    y0 = np.array([0.3, -0.2, 0.5, 0.1])
    print(f"RK4, {nsteps} steps, best of {args.repeat}")
    print(f"{'field':<10} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8} {'max |diff|':>11}")
    for make in (fourth_order_field, decoupled_field, ghost_field):
        A = np.ascontiguousarray(make(p).matrix)
        t_py, (ref, _) = best_of(lambda: _kernels_py.rk4_linear(A, y0, args.dt, nsteps), args.repeat)
        if _compiled is None:
            print(f"{make(p).name:<10} {t_py:11.4f} {'n/a':>11}")
            continue
        t_cy, (out, _) = best_of(lambda: _compiled.rk4_linear(A, y0, args.dt, nsteps), args.repeat)
        diff = float(np.max(np.abs(np.asarray(out) - ref)))
        print(f"{make(p).name:<10} {t_py:11.4f} {t_cy:11.4f} {t_py / t_cy:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
