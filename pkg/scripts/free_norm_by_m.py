#!/usr/bin/env python3
"""Per-m free-norm lower bounds next to the structural upper bound.

Tabulates how the certified lower bound grows with the witness size m for
a few random expressions.  Equality with the upper bound at some m proves
the norm is attained there; a remaining gap says nothing either way.
"""

import argparse

import numpy as np

from fbllab.expr import random_expr, to_string
from fbllab.lattice import load_lattice
from fbllab.errors import DominationFailed
from fbllab.norms import domination_upper, free_norm_lower, structural_majorant


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--lattice", default="powerset(2)")
    ap.add_argument("--count", type=int, default=5)
    ap.add_argument("--max-m", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--starts", type=int, default=16)
    ap.add_argument("--iterations", type=int, default=100)
    args = ap.parse_args()
    L = load_lattice(args.lattice)
    rng = np.random.default_rng(args.seed)
    header = [f"{'expression':<48}"] + [f"{'m=' + str(m):>8}" for m in range(1, args.max_m + 1)]
    print("  ".join(header + [f"{'upper':>8}"]))
    for _ in range(args.count):
        f = random_expr(L, rng, depth=3)
        lows = [free_norm_lower(f, m, starts=args.starts, iterations=args.iterations,
                                seed=args.seed, vertex_cap=200_000).lower
                for m in range(1, args.max_m + 1)]
        try:
            up = str(domination_upper(f, [(c, x) for x, c in structural_majorant(f).items()]))
        except DominationFailed:
            up = "inf"
        name = to_string(f)
        name = name if len(name) <= 48 else name[:47] + "…"
        print("  ".join([f"{name:<48}"] + [f"{str(v):>8}" for v in lows] + [f"{up:>8}"]))


if __name__ == "__main__":
    main()
