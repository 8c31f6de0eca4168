"""Scalar extremum search used on dispersion curves."""
from __future__ import annotations

import math

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, a, b, rtol=1e-10, max_iter=500):
    """Maximise a unimodal ``f`` on ``[a, b]`` by golden-section search.

    Stops once the bracket width drops below ``rtol`` times its midpoint.
    Returns ``(x, f(x))``.
    """
    if b < a:
        a, b = b, a
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= rtol * 0.5 * abs(a + b):
            break
        # ">=" keeps the left interval on ties, i.e. prefers smaller x
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def scan_then_golden(f, grid, rtol=1e-10):
    """Dense scan of ``f`` over an increasing ``grid`` followed by golden refinement.

    The scan picks the first maximal grid point; refinement runs on the two
    neighbouring cells. Returns ``(x, f(x))``.
    """
    values = [f(x) for x in grid]
    i = max(range(len(values)), key=lambda j: (values[j], -j))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    x, fx = golden_max(f, lo, hi, rtol=rtol)
    if fx < values[i]:
        return grid[i], values[i]
    return x, fx
