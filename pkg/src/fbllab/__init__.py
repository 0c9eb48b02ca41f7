"""Exact computations in free Banach lattices generated by finite distributive lattices."""

from .dual import DualPoint, dual_point, enumerate_cells, membership, sample_points
from .errors import FBLError
from .expr import Expr, evaluate, gen, opposite_expr, random_expr
from .lattice import FiniteLattice, build_lattice, chain, five_point, powerset
from .norms import domination_upper, free_norm, free_norm_lower, sup_norm
from .scenarios import run_all, run_scenario

__version__ = "0.1.0"

__all__ = [
    "DualPoint", "Expr", "FBLError", "FiniteLattice", "build_lattice", "chain", "domination_upper",
    "dual_point", "enumerate_cells", "evaluate", "five_point", "free_norm", "free_norm_lower", "gen",
    "membership", "opposite_expr", "powerset", "random_expr", "run_all", "run_scenario",
    "sample_points", "sup_norm",
]
