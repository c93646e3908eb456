"""Pure-Python twin of the compiled Bell-tensor kernel.

Selected at import time when the Cython extension is unavailable.  Same
iteration order and same Kahan compensation, so the two backends agree to
the last few ulps (exact agreement is not guaranteed: the C compiler may
contract multiply-adds).
"""
from __future__ import annotations

from typing import Sequence


def planar_square_sum(n: int, indices: Sequence[int], coeffs: Sequence[float]) -> float:
    """Sum over even-popcount masks Y of (sum_j coeffs[j] * (-1)^|Y & indices[j]|)^2."""
    idx = [int(i) for i in indices]
    cs = [float(c) for c in coeffs]
    pairs = list(zip(idx, cs))
    acc = 0.0
    comp = 0.0
    for y in range(1 << n):
        if y.bit_count() & 1:
            continue
        t = 0.0
        for i, c in pairs:
            if (y & i).bit_count() & 1:
                t -= c
            else:
                t += c
        term = t * t - comp
        fresh = acc + term
        comp = (fresh - acc) - term
        acc = fresh
    return acc
