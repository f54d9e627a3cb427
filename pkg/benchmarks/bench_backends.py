#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times (a) raw per-state cost evaluation over random candidate graphs and
(b) whole best-first enumeration runs, once per backend.  Select the default
backend for library users via the CAMUV_MERGE_BACKEND environment variable;
this script switches explicitly.

Usage: python benchmarks/bench_backends.py [--d 10] [--m 2] [--u 3] [--seeds 5]
"""
import argparse
import statistics
import time

import numpy as np

from camuv_merge import kernels
from camuv_merge.instances import ConstraintsUnsatisfiable, generate_instance, project_all
from camuv_merge.integrate import CostEvaluator, overlap
from camuv_merge.search import SearchLimits, enumerate_dags


def bench_kernel(merged, backend: str, evals: int) -> float:
    """Seconds per cost_terms call on randomized candidate graphs."""
    previous = kernels.set_backend(backend)
    try:
        base = overlap(merged)
        ev = CostEvaluator(base, merged)
        rng = np.random.default_rng(0)
        adjs = []
        for _ in range(64):
            adj = ev.base_adj.copy()
            for (i, j) in base.open_pairs:
                c = rng.integers(3)
                if c == 1:
                    adj[i, j] = 1
                elif c == 2:
                    adj[j, i] = 1
            adjs.append(adj)
        kernels.cost_terms(adjs[0], ev.obs, ev.cls)  # warm-up / jit compile
        t0 = time.perf_counter()
        for k in range(evals):
            kernels.cost_terms(adjs[k % len(adjs)], ev.obs, ev.cls)
        return (time.perf_counter() - t0) / evals
    finally:
        kernels.set_backend(previous)


def bench_search(merged, backend: str) -> tuple[float, int]:
    previous = kernels.set_backend(backend)
    try:
        t0 = time.perf_counter()
        result = enumerate_dags(merged, budget=0,
                                limits=SearchLimits(max_popped=2_000_000, max_seconds=120))
        return time.perf_counter() - t0, result.stats.popped
    finally:
        kernels.set_backend(previous)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--d", type=int, default=10)
    parser.add_argument("--p", type=float, default=0.3)
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--u", type=int, default=3)
    parser.add_argument("--seeds", type=int, default=5)
    parser.add_argument("--kernel-evals", type=int, default=2000)
    parser.add_argument("--max-open-pairs", type=int, default=14)
    args = parser.parse_args()

    print(f"instances: d={args.d} p={args.p} m={args.m} u={args.u}")
    rows = []
    seed = 0
    found = 0
    while found < args.seeds and seed < 500:
        seed += 1
        try:
            inst = generate_instance(args.d, args.p, args.m, args.u, seed)
        except ConstraintsUnsatisfiable:
            continue
        merged = project_all(inst)
        n_open = len(overlap(merged).open_pairs)
        if n_open > args.max_open_pairs:
            continue
        found += 1
        per_nb = bench_kernel(merged, "numba", args.kernel_evals)
        per_np = bench_kernel(merged, "numpy", max(200, args.kernel_evals // 10))
        t_nb, popped = bench_search(merged, "numba")
        t_np, _ = bench_search(merged, "numpy")
        rows.append((seed, n_open, per_nb, per_np, t_nb, t_np, popped))
        print(f"  seed={seed:3d} |E|={n_open:2d}  cost_terms: numba {per_nb * 1e6:7.1f}us "
              f"numpy {per_np * 1e6:7.1f}us ({per_np / per_nb:5.1f}x)   "
              f"enumerate: numba {t_nb:6.2f}s numpy {t_np:6.2f}s "
              f"({t_np / t_nb:4.1f}x, {popped} states)")

    if rows:
        kernel_speedups = [r[3] / r[2] for r in rows]
        search_speedups = [r[5] / r[4] for r in rows]
        print(f"median kernel speedup:  {statistics.median(kernel_speedups):5.1f}x")
        print(f"median search speedup:  {statistics.median(search_speedups):5.1f}x")


if __name__ == "__main__":
    main()
