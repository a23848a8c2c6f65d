#!/usr/bin/env python3
"""Benchmark the hot kernels: numba-compiled vs pure-NumPy fallback.

The backend is chosen at import time via ENTMRE_DISABLE_NUMBA, so this
driver re-runs itself in a subprocess for each backend and prints the
comparison.  Run from the repository root:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


WORKLOADS = ("reference_matrix", "mre_objective", "es_descent", "re_objective")


def run_workloads(repeat):
    import numpy as np

    import entmre as em
    from entmre import _kernels
    from entmre.mixed import SearchConfig

    rng = np.random.default_rng(0)
    rho = em.werner_state(0.75)
    evals, evecs = np.linalg.eigh(rho)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    scaled = evecs * np.sqrt(evals)
    s_rho = float(_kernels.entropy_bits(evals))
    m, r = 8, 4
    params = rng.standard_normal(2 * m * r)
    psis = np.array([em.random_pure_state(rng) for _ in range(256)])
    re_params = rng.standard_normal(5 * 8)

    # Warmup (includes JIT compilation when the backend is numba).
    _kernels.pure_reference_matrix(psis[0])
    _kernels.mre_objective_params(params, m, r, rho, s_rho, scaled)
    _kernels.es_refine_mre(params.copy(), m, r, rho, s_rho, scaled, 50, 0.3, 1)
    _kernels.re_objective_params(re_params, 8, rho, s_rho)

    timings = {}

    start = time.perf_counter()
    for _ in range(repeat):
        for psi in psis:
            _kernels.pure_reference_matrix(psi)
    timings["reference_matrix"] = (time.perf_counter() - start) / (repeat * len(psis))

    start = time.perf_counter()
    for _ in range(repeat * 64):
        _kernels.mre_objective_params(params, m, r, rho, s_rho, scaled)
    timings["mre_objective"] = (time.perf_counter() - start) / (repeat * 64)

    start = time.perf_counter()
    for _ in range(repeat):
        _kernels.es_refine_mre(params.copy(), m, r, rho, s_rho, scaled, 400, 0.3, 1)
    timings["es_descent"] = (time.perf_counter() - start) / repeat

    start = time.perf_counter()
    for _ in range(repeat * 64):
        _kernels.re_objective_params(re_params, 8, rho, s_rho)
    timings["re_objective"] = (time.perf_counter() - start) / (repeat * 64)

    # End-to-end sanity point: one full search, also confirming both
    # backends agree exactly.
    result = em.mre_search(rho, SearchConfig(restarts=4, seed=0))
    return {"backend": "numba" if _kernels.NUMBA_ENABLED else "numpy",
            "timings": timings,
            "search_value": result.value}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=8)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        print(json.dumps(run_workloads(args.repeat)))
        return

    reports = {}
    for disable in ("0", "1"):
        env = dict(os.environ, ENTMRE_DISABLE_NUMBA=disable)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker", "--repeat", str(args.repeat)],
            env=env,
            capture_output=True,
            text=True,
            check=True,
        )
        report = json.loads(out.stdout.strip().splitlines()[-1])
        reports[report["backend"]] = report

    numba_t = reports["numba"]["timings"]
    numpy_t = reports["numpy"]["timings"]
    print(f"{'workload':<20} {'numpy':>12} {'numba':>12} {'speedup':>9}")
    for name in WORKLOADS:
        tn, tb = numpy_t[name], numba_t[name]
        print(f"{name:<20} {tn * 1e6:>10.1f}us {tb * 1e6:>10.1f}us {tn / tb:>8.1f}x")
    va = reports["numba"]["search_value"]
    vb = reports["numpy"]["search_value"]
    print(f"search values: numba={va:.12g} numpy={vb:.12g} |diff|={abs(va - vb):.2e}")


if __name__ == "__main__":
    main()
