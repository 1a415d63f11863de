#!/usr/bin/env python3
"""Benchmark the compiled grid kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from edgebot import _grid_py

try:
    from edgebot import _grid_cy
except ImportError:
    _grid_cy = None


def make_grid(rng, n, density):
    occ = np.zeros((n, n), dtype=np.uint8)
    for iy in range(n):
        for ix in range(n):
            if rng.random() < density:
                occ[iy, ix] = 1
    occ[0, 0] = occ[n - 1, n - 1] = 0
    return occ


def bench_astar(mod, grids, n):
    t0 = time.perf_counter()
    solved = 0
    for occ in grids:
        if mod.astar(occ, (0, 0), (n - 1, n - 1)) is not None:
            solved += 1
    return time.perf_counter() - t0, solved


def bench_los(mod, grids, n, rays=400):
    rng = random.Random(7)
    points = [
        (rng.uniform(0.1, n - 0.1), rng.uniform(0.1, n - 0.1),
         rng.uniform(0.1, n - 0.1), rng.uniform(0.1, n - 0.1))
        for _ in range(rays)
    ]
    t0 = time.perf_counter()
    clear = 0
    for occ in grids:
        for x0, y0, x1, y1 in points:
            if mod.los_clear(occ, 1.0, x0, y0, x1, y1):
                clear += 1
    return time.perf_counter() - t0, clear


def bench_inflate(mod, grids, radius=3.6):
    t0 = time.perf_counter()
    total = 0
    for occ in grids:
        total += int(mod.inflate(occ, radius).sum())
    return time.perf_counter() - t0, total


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    parser.add_argument("--size", type=int, default=120)
    parser.add_argument("--grids", type=int, default=20)
    args = parser.parse_args()

    rng = random.Random(42)
    grids = [make_grid(rng, args.size, 0.15) for _ in range(args.grids)]
    backends = [("python", _grid_py)]
    if _grid_cy is not None:
        backends.append(("cython", _grid_cy))
    else:
        print("compiled backend unavailable; benchmarking fallback only")

    results = {}
    for name, mod in backends:
        best = {}
        for _ in range(args.repeats):
            for kernel, fn in (
                ("astar", lambda: bench_astar(mod, grids, args.size)),
                ("los", lambda: bench_los(mod, grids, args.size)),
                ("inflate", lambda: bench_inflate(mod, grids)),
            ):
                elapsed, checksum = fn()
                if kernel not in best or elapsed < best[kernel][0]:
                    best[kernel] = (elapsed, checksum)
        results[name] = best

    print(f"\n{args.grids} grids of {args.size}x{args.size}, best of {args.repeats}:")
    header = f"{'kernel':<10}" + "".join(f"{n:>14}" for n, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for kernel in ("astar", "los", "inflate"):
        row = f"{kernel:<10}"
        times = []
        checks = []
        for name, _ in backends:
            elapsed, checksum = results[name][kernel]
            times.append(elapsed)
            checks.append(checksum)
            row += f"{elapsed * 1000:>12.1f}ms"
        if len(times) == 2:
            row += f"{times[0] / times[1]:>9.1f}x"
        print(row)
        assert len(set(checks)) == 1, f"{kernel}: backends disagree: {checks}"
    print("checksums identical across backends")


if __name__ == "__main__":
    main()
