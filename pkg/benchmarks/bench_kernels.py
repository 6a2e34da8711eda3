#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Runs each kernel on a synthetic workload with both backends and prints a
timing table. Usage: python benchmarks/bench_kernels.py [--scale N]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from geoviz._kernels import _py

try:
    from geoviz._kernels import _native
except ImportError:
    _native = None


def _time(fn, repeat: int = 3) -> float:
    best = float("inf")
    for _ in range(repeat):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def bench_khop(scale: int):
    rng = random.Random(1)
    n = 20_000 * scale
    degree = 8
    neighbor_lists = [
        sorted(rng.sample(range(n), degree)) for _ in range(n)
    ]
    indptr = np.zeros(n + 1, dtype=np.int64)
    indptr[1:] = np.cumsum([len(lst) for lst in neighbor_lists])
    indices = np.array([v for lst in neighbor_lists for v in lst], dtype=np.int64)
    allowed = np.ones(n, dtype=np.uint8)
    return f"khop_reach (n={n}, deg~{degree}, k=6)", lambda impl: impl.khop_reach(
        indptr, indices, 0, 6, allowed
    )


def bench_overlap(scale: int):
    rng = np.random.default_rng(2)
    n = 500_000 * scale
    starts = np.sort(rng.integers(0, 1_000_000, size=n)).astype(np.int64)
    ends = starts + rng.integers(1, 10_000, size=n).astype(np.int64)
    return f"overlap_hits (n={n})", lambda impl: impl.overlap_hits(
        starts, ends, 400_000, 600_000
    )


def bench_bbox(scale: int):
    rng = np.random.default_rng(3)
    n = 500_000 * scale
    lats = rng.uniform(-90, 90, size=n)
    lons = rng.uniform(-179.99, 180, size=n)
    return f"bbox_hits (n={n}, wrap)", lambda impl: impl.bbox_hits(
        lats, lons, -45.0, 45.0, 150.0, -150.0, True
    )


def bench_trigram(scale: int):
    rng = random.Random(4)
    text = "".join(rng.choice("abcdefghijklmnopqrstuvwxyz ") for _ in range(100_000 * scale))
    data = text.encode()
    return f"trigram_counts (len={len(data)}, dim=256)", lambda impl: impl.trigram_counts(
        data, 256
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scale", type=int, default=1, help="workload multiplier")
    args = parser.parse_args()

    if _native is None:
        print("compiled kernels unavailable; run `pip install -e .` with Cython first")

    rows = []
    for build in (bench_khop, bench_overlap, bench_bbox, bench_trigram):
        name, run = build(args.scale)
        t_py = _time(lambda: run(_py))
        if _native is not None:
            t_native = _time(lambda: run(_native))
            assert run(_native) == run(_py), f"{name}: backends disagree"
            rows.append((name, t_py, t_native, t_py / t_native))
        else:
            rows.append((name, t_py, None, None))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  {'python':>10}  {'native':>10}  {'speedup':>8}")
    for name, t_py, t_native, speedup in rows:
        if t_native is None:
            print(f"{name:<{width}}  {t_py * 1e3:>8.1f}ms  {'-':>10}  {'-':>8}")
        else:
            print(
                f"{name:<{width}}  {t_py * 1e3:>8.1f}ms  {t_native * 1e3:>8.1f}ms  {speedup:>7.1f}x"
            )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
