"""Brute-force reference computations used by the tests.

Nothing here uses the cell decomposition or the branch-and-bound; the
oracles enumerate maps and grids directly.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from fbllab.dual import DualPoint
from fbllab.expr import evaluate_batch

LEVELS = (-2, -1, 0, 1, 2)  # numerators over 2: {-1, -1/2, 0, 1/2, 1}


def all_homs_on_grid(L, levels=LEVELS, denominator=2):
    """Every map ``L -> levels/denominator`` that preserves binary meets and joins."""
    n = len(L)
    vals = np.array(levels, dtype=np.int64)
    X = np.array(list(itertools.product(vals, repeat=n)), dtype=np.int64)
    ok = np.ones(len(X), dtype=bool)
    for x in range(n):
        for y in range(x + 1, n):
            ok &= X[:, L.join[x][y]] == np.maximum(X[:, x], X[:, y])
            ok &= X[:, L.meet[x][y]] == np.minimum(X[:, x], X[:, y])
    return [DualPoint(L, tuple(Fraction(int(v), denominator) for v in row)) for row in X[ok]]


def grid_max_abs(f, L, steps=4):
    """Float maximum of ``|f|`` over all grid homomorphisms with step ``1/steps``."""
    pts = all_homs_on_grid(L, levels=tuple(range(-steps, steps + 1)), denominator=steps) \
        if len(L) <= 5 else None
    if pts is None:
        raise ValueError("lattice too large for the grid oracle")
    vals = np.array([[float(v) for v in p.values] for p in pts])
    return float(np.abs(evaluate_batch(f, vals)).max())
