"""Compare the compiled and pure-Python integrator kernels.

Usage: python benchmarks/bench_integrator.py [--repeat N] [--t-end T]

Both kernels run the same adaptive Dormand-Prince loop on the endemic preset
from a seeded start; results must agree bit for bit.
"""
import argparse
import statistics
import time

import numpy as np

from crimedyn.experiments import TABLE3, TABLE4
from crimedyn.integrator import KERNELS, SolverConfig, integrate, seeded_random_initial_condition


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--t-end", type=float, default=500.0)
    args = ap.parse_args()

    if "cython" not in KERNELS:
        print("compiled kernel not built; only the Python kernel is available")
    y0 = seeded_random_initial_condition(0)
    cases = [
        ("table4 rtol=1e-8 dense 0.01", TABLE4.params, SolverConfig()),
        ("table4 rtol=1e-12 dense 1.0", TABLE4.params, SolverConfig(rel_tol=1e-12, abs_tol=1e-12, output_interval=1.0)),
        ("table3 rtol=1e-8 dense 0.01", TABLE3.params, SolverConfig()),
    ]
    print(f"{'case':32s} {'backend':8s} {'best [ms]':>10s} {'median [ms]':>12s} {'steps':>7s}")
    for label, params, cfg in cases:
        results = {}
        for name in KERNELS:
            best, med, traj = best_of(lambda: integrate(params, y0, args.t_end, cfg, backend=name), args.repeat)
            results[name] = (best, traj)
            print(f"{label:32s} {name:8s} {best * 1e3:10.2f} {med * 1e3:12.2f} {traj.steps_accepted:7d}")
        if len(results) == 2:
            (tp, a), (tc, b) = results["python"], results["cython"]
            same = np.array_equal(a.states, b.states)
            print(f"{'':32s} speedup x{tp / tc:.1f}; identical output: {same}")


if __name__ == "__main__":
    main()
