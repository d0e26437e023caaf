#!/usr/bin/env python3
"""Time the simplex inner-loop kernels: compiled extension vs NumPy fallback.

Usage: python benchmarks/compare_backends.py [--seed N] [--stages K]
       [--branching B]

Solves the same seeded case-study LP once per available backend and reports
wall time, pivot counts, and the objective agreement.
"""

import argparse
import time

from prepos import _kernels_py, build_lp, solve
from prepos.casestudy import CaseStudyConfig, build_case_study

try:
    from prepos import _speedups
except ImportError:
    _speedups = None


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--stages", type=int, default=4)
    parser.add_argument("--branching", type=int, default=2)
    args = parser.parse_args()

    cfg = CaseStudyConfig(seed=args.seed, stages=args.stages,
                          branching=args.branching, occurrence=0.3)
    inst = build_case_study(cfg)
    t0 = time.perf_counter()
    lp = build_lp(inst)
    build_secs = time.perf_counter() - t0
    print(f"instance: {len(inst.tree)} scenarios, LP {lp.n_rows} rows x "
          f"{lp.n_columns} columns (built in {build_secs:.2f}s)")

    backends = [("python", _kernels_py)]
    if _speedups is not None:
        backends.append(("cython", _speedups))
    else:
        print("compiled kernels unavailable; timing the fallback only")

    results = {}
    for name, kernels in backends:
        t0 = time.perf_counter()
        sol = solve(lp, kernels=kernels)
        secs = time.perf_counter() - t0
        results[name] = (secs, sol)
        print(f"{name:>7}: {secs:8.2f}s  {sol.iterations:6d} pivots  "
              f"status={sol.status}  objective={sol.objective:.6f}")

    if len(results) == 2:
        py_secs, py_sol = results["python"]
        cy_secs, cy_sol = results["cython"]
        gap = abs(py_sol.objective - cy_sol.objective) / max(1.0, abs(py_sol.objective))
        print(f"speedup: {py_secs / cy_secs:.2f}x  relative objective gap: {gap:.2e}")


if __name__ == "__main__":
    main()
