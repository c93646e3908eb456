#!/usr/bin/env python3
"""Benchmark: compiled Bell-tensor kernel vs the pure-Python fallback.

The scan is 2^n axis masks times the antidiagonal support size, so the gap
widens quickly with n and support.  Family states keep small supports; the
random full-support states show the worst case.

Run:  python3 benchmarks/bench_bell_kernel.py
"""
import time
from fractions import Fraction

import numpy as np

from ghzmetro import GhzDiagonalState, build_rho_nk
from ghzmetro import bell
from ghzmetro._bell_kernel_py import planar_square_sum as planar_python

try:
    from ghzmetro._bell_kernel import planar_square_sum as planar_compiled
except ImportError:
    planar_compiled = None


def full_support_state(n: int, seed: int = 0) -> GhzDiagonalState:
    rng = np.random.default_rng(seed)
    reps = 1 << (n - 1)
    weights = rng.integers(1, 100, size=2 * reps)
    total = int(weights.sum())
    lp = {i: Fraction(int(weights[2 * i]), total) for i in range(reps)}
    lm = {i: Fraction(int(weights[2 * i + 1]), total) for i in range(reps)}
    return GhzDiagonalState(n, lp, lm)


def support_arrays(state):
    pairs = [(i, float(state.sector_diff(i))) for i in state.coherence_support()]
    idx = np.array([i for i, _ in pairs], dtype=np.int64)
    cs = np.array([c for _, c in pairs], dtype=np.float64)
    return idx, cs


def timed(fn, *args, repeats=3):
    best = float("inf")
    value = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        value = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return value, best


def main():
    print(f"selected backend: {bell.KERNEL_BACKEND}")
    cases = [
        ("rho_12,3 (support 79)", build_rho_nk(12, 3)),
        ("rho_14,3 (support 106)", build_rho_nk(14, 3)),
        ("random n=10, full support", full_support_state(10)),
        ("random n=12, full support", full_support_state(12)),
    ]
    print(f"{'case':<28} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for label, state in cases:
        idx, cs = support_arrays(state)
        py_val, py_t = timed(planar_python, state.n, idx, cs, repeats=1)
        if planar_compiled is None:
            print(f"{label:<28} {py_t:>11.3f}s {'n/a':>12} {'n/a':>9}")
            continue
        c_val, c_t = timed(planar_compiled, state.n, idx, cs)
        assert abs(py_val - c_val) <= 1e-9 * max(1.0, abs(py_val))
        print(f"{label:<28} {py_t:>11.3f}s {c_t:>11.4f}s {py_t / c_t:>8.1f}x")


if __name__ == "__main__":
    main()
