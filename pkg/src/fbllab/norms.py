"""Certified norm computations on the dual complex.

Sup-norms are computed by branch-and-bound over the outer facets of each cell
(``v_0 = -1`` or ``v_k = 1``): every expression is positively homogeneous, so
its extreme values over the dual object are attained there.  Each node is a
simplex on which the expression is evaluated symbolically through exact
vertex values.  Where a ``sup``/``inf``/``abs``/``pos`` node is undecided,
the simplex is cut along the zero set of the (affine) argument difference, so
leaves are simplices on which the expression is affine and the maximum is
read off the vertices exactly.  Interval and Lipschitz bounds drive pruning.

Free norms are bounded below by explicit witness tuples and above by
pointwise domination ``|f| <= Σ c_j |δ_{x_j}|``, which gives ``||f|| <= Σ c_j``.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .dual import (
    Cell,
    DualPoint,
    as_fraction,
    constant,
    convex_combination,
    enumerate_cells,
    membership,
    one,
    point_from_cell,
    separation_witness,
    sign_vertex_points,
)
from .errors import DominationFailed, ParamError
from .expr import (
    Expr,
    absolute,
    add,
    evaluate,
    evaluate_batch,
    evaluate_values,
    gen,
    lipschitz,
    order_density_function,
    random_expr,
    scale,
    strong_unit_candidate,
    sup,
    total,
)
from .lattice import Element, FiniteLattice, chain

DEFAULT_EPS = Fraction(1, 1000)
DEFAULT_NODE_BUDGET = 100_000


# -- symbolic evaluation on a simplex ----------------------------------------------

def _analyse(g: Expr, verts: Sequence[tuple], levels: Sequence[int]):
    """Evaluate ``g`` over a simplex.

    Returns ``(result, kink)``: ``result`` is ``("a", vertex_values)`` when
    ``g`` is affine on the simplex, otherwise ``("i", (lo, hi))``; ``kink``
    holds vertex values of the first undecided affine argument, or ``None``.
    """
    memo: dict = {}
    kink: list = []
    nv = len(verts)

    def rng(r):
        if r[0] == "a":
            return min(r[1]), max(r[1])
        return r[1]

    def go(e: Expr):
        k = id(e)
        if k in memo:
            return memo[k]
        op = e.op
        if op == "gen":
            j = levels[e.elem]
            r = ("a", tuple(v[j] for v in verts))
        elif op == "scale":
            a = go(e.args[0])
            c = e.coef
            if a[0] == "a":
                r = ("a", tuple(c * x for x in a[1]))
            else:
                lo, hi = a[1]
                r = ("i", (c * lo, c * hi) if c >= 0 else (c * hi, c * lo))
        elif op == "add":
            a, b = go(e.args[0]), go(e.args[1])
            if a[0] == "a" and b[0] == "a":
                r = ("a", tuple(x + y for x, y in zip(a[1], b[1])))
            else:
                (l1, h1), (l2, h2) = rng(a), rng(b)
                r = ("i", (l1 + l2, h1 + h2))
        elif op in ("sup", "inf"):
            a, b = go(e.args[0]), go(e.args[1])
            r = None
            if a[0] == "a" and b[0] == "a":
                d = tuple(x - y for x, y in zip(a[1], b[1]))
                if all(x >= 0 for x in d):
                    r = a if op == "sup" else b
                elif all(x <= 0 for x in d):
                    r = b if op == "sup" else a
                elif not kink:
                    kink.append(d)
            else:
                (l1, h1), (l2, h2) = rng(a), rng(b)
                if l1 >= h2:
                    r = a if op == "sup" else b
                elif l2 >= h1:
                    r = b if op == "sup" else a
            if r is None:
                (l1, h1), (l2, h2) = rng(a), rng(b)
                if op == "sup":
                    r = ("i", (max(l1, l2), max(h1, h2)))
                else:
                    r = ("i", (min(l1, l2), min(h1, h2)))
        elif op in ("abs", "pos"):
            a = go(e.args[0])
            lo, hi = rng(a)
            if lo >= 0:
                r = a
            elif hi <= 0:
                if op == "pos":
                    r = ("a", (Fraction(0),) * nv)
                elif a[0] == "a":
                    r = ("a", tuple(-x for x in a[1]))
                else:
                    r = ("i", (-hi, -lo))
            else:
                if a[0] == "a" and not kink:
                    kink.append(a[1])
                r = ("i", (Fraction(0), max(-lo, hi))) if op == "abs" else ("i", (Fraction(0), hi))
        else:
            raise ValueError(f"unknown node {op!r}")
        memo[k] = r
        return r

    res = go(g)
    return res, (kink[0] if kink else None)


def _split(verts: list[tuple], d: Sequence[Fraction]) -> tuple[list[tuple], list[tuple]]:
    a = next(i for i, x in enumerate(d) if x > 0)
    b = next(i for i, x in enumerate(d) if x < 0)
    t = d[a] / (d[a] - d[b])
    pa, pb = verts[a], verts[b]
    e = tuple(x + t * (y - x) for x, y in zip(pa, pb))
    left = list(verts)
    left[a] = e
    right = list(verts)
    right[b] = e
    return left, right


def _facets(cell: Cell) -> list[list[tuple]]:
    vs = cell.vertices()
    d = cell.dim
    return [vs[:d], vs[1:]]


@dataclass
class MaxResult:
    value_low: Fraction
    value_high: Fraction
    argmax_point: DualPoint | None
    argmax_cell: int | None
    argmax_coords: tuple | None
    nodes: int
    budget_exceeded: bool


def maximize(g: Expr, eps=DEFAULT_EPS, node_budget: int = DEFAULT_NODE_BUDGET,
             target=None) -> MaxResult:
    """Certified bounds on ``sup g`` over the outer facets of the dual complex.

    For positively homogeneous ``g`` this is ``sup g`` over the whole dual
    object whenever the result is non-negative.  Search stops when the gap
    is at most ``eps``.  With ``target`` set, nodes whose upper bound is at
    most ``target`` are discarded and the search stops as soon as a value
    above ``target`` is found.
    """
    eps = as_fraction(eps)
    if node_budget < 1:
        raise ParamError("node budget must be positive")
    L = g.lattice
    lip = lipschitz(g).value
    cells = enumerate_cells(L)
    heap: list = []
    counter = itertools.count()
    for cell in cells:
        for verts in _facets(cell):
            heapq.heappush(heap, (_neg_inf(), next(counter), cell.index, verts))

    best_val: Fraction | None = None
    best_key = None
    pruned_high: Fraction | None = None
    nodes = 0
    stop_upper = None
    exceeded = False

    def offer(val, ci, coords):
        nonlocal best_val, best_key
        key = (ci, coords)
        if best_val is None or val > best_val or (val == best_val and key < best_key):
            best_val, best_key = val, key

    def floor_for_prune():
        base = best_val + eps if best_val is not None else None
        if target is not None:
            t = as_fraction(target)
            base = t if base is None else max(base, t)
        return base

    while heap:
        neg_up, _, ci, verts = heap[0]
        up = None if neg_up is _NEG_INF_SENTINEL else -neg_up
        floor = floor_for_prune()
        if up is not None and floor is not None and up <= floor:
            stop_upper = up
            break
        if target is not None and best_val is not None and best_val > as_fraction(target):
            stop_upper = up
            break
        if nodes >= node_budget:
            exceeded = True
            break
        heapq.heappop(heap)
        nodes += 1
        cell = cells[ci]
        levels = cell.levels
        res, kink = _analyse(g, verts, levels)
        if res[0] == "a":
            vals = res[1]
            for v, x in zip(vals, verts):
                offer(v, ci, x)
            continue
        vals = [evaluate_values(g, [x[m] for m in levels]) for x in verts]
        for v, x in zip(vals, verts):
            offer(v, ci, x)
        i_best = max(range(len(vals)), key=lambda i: vals[i])
        diam = max(max(abs(a - b) for a, b in zip(verts[i_best], y)) for y in verts)
        upper = min(res[1][1], vals[i_best] + lip * diam)
        floor = floor_for_prune()
        if floor is not None and upper <= floor:
            pruned_high = upper if pruned_high is None else max(pruned_high, upper)
            continue
        if kink is None:
            raise AssertionError("non-affine node without a kink")
        for child in _split(list(verts), kink):
            heapq.heappush(heap, (-upper, next(counter), ci, child))

    high = best_val
    for extra in (pruned_high, stop_upper):
        if extra is not None:
            high = max(high, extra)
    if exceeded:
        for neg_up, *_ in heap:
            if neg_up is _NEG_INF_SENTINEL:
                high = None
                break
            high = max(high, -neg_up)
        if high is None:
            high = best_val + lip * 2
    ci, coords = best_key
    pt = point_from_cell(cells[ci], coords)
    return MaxResult(best_val, max(high, best_val), pt, ci, coords, nodes, exceeded)


class _NegInf:
    def __lt__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __le__(self, other):
        return True

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return 0


_NEG_INF_SENTINEL = _NegInf()


def _neg_inf():
    return _NEG_INF_SENTINEL


# -- sup-norm -------------------------------------------------------------------------

@dataclass
class SupNormCertificate:
    value_low: Fraction
    value_high: Fraction
    argmax_point: DualPoint
    eps: Fraction
    nodes: int = 0
    budget_exceeded: bool = False

    @property
    def gap(self) -> Fraction:
        return self.value_high - self.value_low

    def to_json(self) -> dict:
        return {
            "value_low": str(self.value_low),
            "value_high": str(self.value_high),
            "argmax_point": self.argmax_point.to_json(),
            "eps": str(self.eps),
            "nodes": self.nodes,
            "budget_exceeded": self.budget_exceeded,
        }


def sup_norm(f: Expr, eps=DEFAULT_EPS, node_budget: int = DEFAULT_NODE_BUDGET) -> SupNormCertificate:
    """Two-sided certificate for ``sup |f|`` over the dual object."""
    eps = as_fraction(eps)
    if eps <= 0:
        raise ParamError("eps must be positive")
    L = f.lattice
    if lipschitz(f).value == 0:
        return SupNormCertificate(Fraction(0), Fraction(0), one(L), eps)
    r = maximize(absolute(f), eps, node_budget)
    return SupNormCertificate(r.value_low, r.value_high, r.argmax_point, eps, r.nodes, r.budget_exceeded)


# -- free norm: lower bounds --------------------------------------------------------------

def tuple_objective(f: Expr, points: Sequence[DualPoint]) -> Fraction:
    return sum((abs(evaluate(f, p)) for p in points), Fraction(0))


def tuple_constraint(points: Sequence[DualPoint]) -> Fraction:
    L = points[0].lattice
    return max(sum((abs(p.values[z]) for p in points), Fraction(0)) for z in range(len(L)))


@dataclass
class NormEstimate:
    lower: Fraction
    upper: Fraction | None
    witness: tuple[DualPoint, ...]
    objective: Fraction
    constraint: Fraction
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.constraint <= 0 and self.witness:
            raise ValueError("witness constraint must be positive")
        if self.upper is not None and self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    def verify(self, f: Expr) -> bool:
        """Recompute objective, constraint and ratio exactly from the witness."""
        if not self.witness:
            return self.lower == 0
        if not all(membership(p.lattice, p.values) for p in self.witness):
            return False
        obj = tuple_objective(f, self.witness)
        con = tuple_constraint(self.witness)
        return obj == self.objective and con == self.constraint and obj / con == self.lower

    def to_json(self) -> dict:
        return {
            "lower": str(self.lower),
            "upper": None if self.upper is None else str(self.upper),
            "witness": [p.to_json() for p in self.witness],
            "objective": str(self.objective),
            "constraint": str(self.constraint),
            "meta": self.meta,
        }


class _Best:
    def __init__(self):
        self.ratio = Fraction(0)
        self.points: tuple = ()
        self.obj = Fraction(0)
        self.con = Fraction(1)

    def offer(self, f: Expr, points: Sequence[DualPoint]):
        con = tuple_constraint(points)
        if con <= 0:
            return
        obj = tuple_objective(f, points)
        ratio = obj / con
        if ratio > self.ratio:
            self.ratio, self.points, self.obj, self.con = ratio, tuple(points), obj, con


def free_norm_lower(
    f: Expr,
    m: int = 1,
    *,
    vertex_cap: int = 10**6,
    starts: int = 64,
    iterations: int = 200,
    seed: int = 0,
    eps=DEFAULT_EPS,
    witnesses: Iterable[Sequence[DualPoint]] = (),
    use_sup_norm: bool = True,
) -> NormEstimate:
    """Certified lower bound ``Σ|f(x_i)| / max_z Σ|x_i(z)|`` over witness tuples of size at most ``m``.

    Candidates: user ``witnesses``, the sup-norm argmax, every multiset of
    sign-vertex points up to ``vertex_cap`` tuples in total, and a
    multi-start coordinate ascent whose float optimum is rationalised and
    re-verified.  Each tuple size uses its own RNG stream so the bound is
    non-decreasing in ``m`` for a fixed seed.
    """
    if m < 1:
        raise ParamError("m must be at least 1")
    L = f.lattice
    best = _Best()
    for w in witnesses:
        w = tuple(w)
        if w:
            best.offer(f, w)
    if use_sup_norm:
        cert = sup_norm(f, eps)
        best.offer(f, (cert.argmax_point,))

    pool = sign_vertex_points(L)
    fvals = [abs(evaluate(f, p)) for p in pool]
    fv = np.array([float(v) for v in fvals])
    A = np.array([[abs(int(v)) for v in p.values] for p in pool], dtype=np.int64)
    remaining = vertex_cap
    for s in range(1, m + 1):
        remaining = _vertex_tuples(f, pool, fvals, fv, A, s, remaining, seed, best)
        _ascent(f, L, s, starts, iterations, seed, best)

    meta = {
        "m": m, "vertex_cap": vertex_cap, "starts": starts, "iterations": iterations,
        "seed": seed, "eps": str(as_fraction(eps)),
    }
    return NormEstimate(best.ratio, None, best.points, best.obj, best.con, meta)


def _vertex_tuples(f, pool, fvals, fv, A, s, remaining, seed, best) -> int:
    P = len(pool)
    if P == 0 or remaining <= 0:
        return remaining
    count = math.comb(P + s - 1, s)
    if count <= remaining:
        idx = np.array(list(itertools.combinations_with_replacement(range(P), s)), dtype=np.int64)
    else:
        rng = np.random.default_rng([seed, s, 1])
        idx = np.sort(rng.integers(0, P, size=(remaining, s)), axis=1)
    remaining -= len(idx)
    obj = fv[idx].sum(axis=1)
    con = A[idx].sum(axis=1).max(axis=1)
    ratio = np.where(con > 0, obj / np.maximum(con, 1), 0.0)
    top = np.argsort(-ratio, kind="stable")[:8]
    for t in top:
        best.offer(f, [pool[i] for i in idx[t]])
    return remaining


def _ascent(f: Expr, L: FiniteLattice, s: int, starts: int, iterations: int, seed: int, best: _Best):
    if starts <= 0 or iterations <= 0:
        return
    cells = enumerate_cells(L)
    rng = np.random.default_rng([seed, s, 2])
    lev = [np.array(c.levels) for c in cells]
    for _ in range(starts):
        cis = rng.integers(0, len(cells), size=s)
        coords = [np.sort(rng.uniform(-1, 1, size=cells[c].dim)) for c in cis]
        step = 0.5
        vals = np.array([co[lev[c]] for co, c in zip(coords, cis)])
        fx = np.abs(evaluate_batch(f, vals))
        colsum = np.abs(vals).sum(axis=0)

        def score(fsum, cs):
            m = cs.max()
            return fsum / m if m > 0 else 0.0

        cur = score(fx.sum(), colsum)
        for _ in range(iterations):
            cand_rows, meta = [], []
            for i, c in enumerate(cis):
                co = coords[i]
                for j in range(len(co)):
                    lo = co[j - 1] if j > 0 else -1.0
                    hi = co[j + 1] if j + 1 < len(co) else 1.0
                    for sgn in (1.0, -1.0):
                        nv = min(max(co[j] + sgn * step, lo), hi)
                        if nv == co[j]:
                            continue
                        new = co.copy()
                        new[j] = nv
                        cand_rows.append(new[lev[c]])
                        meta.append((i, new))
            if not cand_rows:
                break
            rows = np.array(cand_rows)
            fnew = np.abs(evaluate_batch(f, rows))
            best_gain, best_k = cur, -1
            for k, (i, _) in enumerate(meta):
                cs = colsum - np.abs(vals[i]) + np.abs(rows[k])
                sc = score(fx.sum() - fx[i] + fnew[k], cs)
                if sc > best_gain + 1e-12:
                    best_gain, best_k = sc, k
            if best_k < 0:
                step /= 2
                if step < 1e-6:
                    break
                continue
            i, new = meta[best_k]
            colsum = colsum - np.abs(vals[i]) + np.abs(rows[best_k])
            vals[i] = rows[best_k]
            fx[i] = fnew[best_k]
            coords[i] = new
            cur = best_gain
        pts = []
        for co, c in zip(coords, cis):
            q = [min(max(Fraction(float(x)).limit_denominator(2**16), Fraction(-1)), Fraction(1)) for x in co]
            for j in range(1, len(q)):
                q[j] = max(q[j], q[j - 1])
            pts.append(point_from_cell(cells[c], q))
        best.offer(f, pts)


# -- free norm: upper bounds ------------------------------------------------------------------

def structural_majorant(f: Expr) -> dict[int, Fraction]:
    """Coefficients ``c`` with ``|f| <= Σ c_x |δ_x|`` pointwise, by structural induction."""
    memo: dict = {}

    def go(e: Expr) -> dict:
        k = id(e)
        if k in memo:
            return memo[k]
        op = e.op
        if op == "gen":
            r = {e.elem: Fraction(1)}
        elif op == "scale":
            r = {x: abs(e.coef) * c for x, c in go(e.args[0]).items()}
        elif op == "add":
            r = dict(go(e.args[0]))
            for x, c in go(e.args[1]).items():
                r[x] = r.get(x, Fraction(0)) + c
        elif op in ("sup", "inf"):
            # |max(a, b)| <= max(|a|, |b|) <= Σ max(a_x, b_x) |δ_x|
            r = dict(go(e.args[0]))
            for x, c in go(e.args[1]).items():
                r[x] = max(r.get(x, Fraction(0)), c)
        else:
            r = go(e.args[0])
        memo[k] = r
        return r

    return {x: c for x, c in sorted(go(f).items()) if c != 0}


def domination_upper(f: Expr, generators: Sequence[tuple[object, Element]],
                     node_budget: int = DEFAULT_NODE_BUDGET) -> Fraction:
    """Certify ``|f| <= Σ c_j |δ_{x_j}|`` on the dual object and return ``Σ c_j``.

    Raises :class:`DominationFailed` with a violating point, or with
    ``point=None`` if the node budget runs out first.
    """
    L = f.lattice
    coefs = [(as_fraction(c), L.index(x)) for c, x in generators]
    if any(c < 0 for c, _ in coefs):
        raise ParamError("domination coefficients must be non-negative")
    bound = sum((c for c, _ in coefs), Fraction(0))
    if coefs:
        dom = total(scale(c, absolute(gen(L, x))) for c, x in coefs)
        g = add(absolute(f), scale(-1, dom))
    else:
        g = absolute(f)
    r = maximize(g, eps=0, node_budget=node_budget, target=0)
    if r.value_low > 0:
        raise DominationFailed(
            f"domination fails: excess {r.value_low} at a dual point", r.argmax_point, r.value_low)
    if r.budget_exceeded:
        raise DominationFailed("node budget exhausted before domination was certified")
    return bound


def free_norm(f: Expr, m: int = 1, generators: Sequence[tuple[object, Element]] | None = None,
              **kwargs) -> NormEstimate:
    """Lower bound from :func:`free_norm_lower`, upper bound from a domination certificate.

    Without explicit ``generators`` the structural majorant is used.  A
    failed certificate leaves ``upper`` as ``None`` (meaning +∞).
    """
    est = free_norm_lower(f, m, **kwargs)
    if generators is None:
        generators = [(c, x) for x, c in structural_majorant(f).items()]
    try:
        upper = domination_upper(f, generators) if generators else Fraction(0)
    except DominationFailed:
        upper = None
    est.upper = upper
    if upper is not None and est.lower > upper:
        raise AssertionError("certified bounds are inconsistent")
    est.meta["domination"] = [[str(as_fraction(c)), f.lattice.elements[f.lattice.index(x)]]
                              for c, x in generators]
    return est


# -- strong units -------------------------------------------------------------------------------

@dataclass
class StrongUnitReport:
    has_strong_unit: bool
    unit: Expr | None
    cells_checked: int
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "has_strong_unit": self.has_strong_unit,
            "unit": None if self.unit is None else str(self.unit),
            "cells_checked": self.cells_checked,
            "failures": self.failures,
            "notes": self.notes,
        }


def _grid(denominator: int = 2) -> list[Fraction]:
    return [Fraction(i, denominator) for i in range(-denominator, denominator + 1)]


def strong_unit_check(L: FiniteLattice, grid_denominator: int = 2, certify: bool = True) -> StrongUnitReport:
    """Verify ``|δ_x| <= |δ_min| ∨ |δ_max|`` on every cell.

    Per cell the claim is ``|v_{m(x)}| <= max(|v_0|, |v_k|)`` under
    ``v_0 <= v_{m(x)} <= v_k``, which holds because ``m(x)`` lies between
    the levels of the bottom and the top.  The check confirms that
    betweenness, evaluates exactly on sign vertices and on a rational grid,
    and optionally runs the branch-and-bound domination certificate.
    """
    bot, top = L.bottom, L.top
    # a finite lattice always has both extremes; guard anyway for hand-built tables
    if not all(L.leq[bot][z] and L.leq[z][top] for z in range(len(L))):
        return StrongUnitReport(False, None, 0, notes=[
            "lattice lacks a maximum or minimum; the obstruction scenario exercises this case"])
    unit = strong_unit_candidate(L)
    failures = []
    cells = enumerate_cells(L)
    grid = _grid(grid_denominator)
    for cell in cells:
        k = cell.dim - 1
        lb, lt = cell.levels[bot], cell.levels[top]
        if lb != 0 or lt != k:
            failures.append({"cell": cell.index, "reason": "extremes are not the extreme levels"})
            continue
        coords_list = list(cell.sign_vertices()) + list(itertools.combinations_with_replacement(grid, cell.dim))
        for v in coords_list:
            for x in range(len(L)):
                w = v[cell.levels[x]]
                if abs(w) > max(abs(v[0]), abs(v[k])):
                    failures.append({"cell": cell.index, "element": L.elements[x],
                                     "coords": [str(c) for c in v]})
    if certify and not failures:
        for x in range(len(L)):
            g = add(absolute(gen(L, x)), scale(-1, unit))
            r = maximize(g, eps=0, target=0)
            if r.value_low > 0 or r.budget_exceeded:
                failures.append({"element": L.elements[x], "reason": "certificate failed"})
    return StrongUnitReport(not failures, unit, len(cells), failures)


@dataclass
class ObstructionReport:
    N: int
    n: int
    x: str
    y: str
    z_point: DualPoint
    g_values: list
    delta_y_value: Fraction
    gap_lower_bounds: list
    passed: bool

    def to_json(self) -> dict:
        return {
            "N": self.N, "n": self.n, "x": self.x, "y": self.y,
            "z_point": self.z_point.to_json(),
            "g_values": [str(v) for v in self.g_values],
            "delta_y_value": str(self.delta_y_value),
            "gap_lower_bounds": [str(v) for v in self.gap_lower_bounds],
            "passed": self.passed,
        }


def strong_unit_obstruction(N: int, n: int, corpus: Sequence[Expr] | None = None,
                            corpus_size: int = 100, seed: int = 0) -> ObstructionReport:
    """Growing-chain demonstration that expressions over the first ``n``
    generators of ``chain(N)`` cannot approximate anything dominating ``|δ_y|``
    for ``y`` above their supremum."""
    if n < 1 or n >= N - 1:
        raise ParamError("need 1 <= n < N - 1")
    L = chain(N)
    low = list(range(n))
    x = L.elements[n - 1]
    y = L.elements[n]
    z = separation_witness(L, x, y)
    if corpus is None:
        rng = np.random.default_rng(seed)
        corpus = [random_expr(L, rng, depth=3, elements=low) for _ in range(corpus_size)]
    g_vals = [evaluate(g, z) for g in corpus]
    dy = evaluate(gen(L, y), z)
    # any f >= |δ_y| has |f(z) - g(z)| >= |δ_y(z)| - |g(z)|
    gaps = [abs(dy) - abs(v) for v in g_vals]
    ok = all(v == 0 for v in g_vals) and abs(dy) == 1 and all(gp >= 1 for gp in gaps)
    return ObstructionReport(N, n, x, y, z, g_vals, dy, gaps, ok)


@dataclass
class DemoReport:
    N: int
    step_index: int
    alphas: list
    f_at_one: Fraction
    threshold: Fraction
    x_point: DualPoint
    y_point: DualPoint
    rows: list
    caveats: list
    passed: bool

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "step_index": self.step_index,
            "alphas": [str(a) for a in self.alphas],
            "f_at_one": str(self.f_at_one),
            "threshold": str(self.threshold),
            "x_point": self.x_point.to_json(),
            "y_point": self.y_point.to_json(),
            "rows": self.rows,
            "caveats": self.caveats,
            "passed": self.passed,
        }


def order_density_demo(N: int, t_grid: Sequence | None = None, h_exprs: Sequence[Expr] | None = None,
                       low: int | None = None, seed: int = 0) -> DemoReport:
    """Witness inequalities for the failure of order density on a truncated chain.

    ``f = (|δ_{u_0}| - Σ α_n |δ_{u_n}|)_+`` with ``α_n = 2^{-n-1}``; for
    ``h`` depending on the ``low`` smallest elements, the step point ``y``
    jumps at the next element ``u_s`` and ``z_t = t x + (1 - t) y``.  The
    threshold ``t̄ = α_s / (|x(u_0)| + α_s (1 - x(u_s)))`` makes the
    bound ``t |x(u_0)| - α_s (t x(u_s) + 1 - t)`` negative for ``t < t̄``.
    """
    if N < 4:
        raise ParamError("N must be at least 4")
    L = chain(N)
    f = order_density_function(L)
    alphas = [Fraction(1, 2 ** (k + 1)) for k in range(1, N)]
    low = low if low is not None else max(1, N // 2 - 1)
    if not 1 <= low < N:
        raise ParamError("low must satisfy 1 <= low < N")
    s = low  # index of the first element above the generators of h
    if h_exprs is None:
        rng = np.random.default_rng(seed)
        pool = list(range(low))
        h_exprs = [absolute(gen(L, 0))] + [
            absolute(random_expr(L, rng, depth=2, elements=pool)) for _ in range(7)
        ]
    y = DualPoint(L, tuple(Fraction(1) if i >= s else Fraction(0) for i in range(N)))
    rows = []
    ok = membership(L, y.values)
    f_one = evaluate(f, one(L))
    ok &= f_one == 1 - sum(alphas) and f_one > 0
    if t_grid is None:
        t_grid = [Fraction(j, 64) for j in range(1, 65)]
    t_grid = [as_fraction(t) for t in t_grid]
    thresholds = []
    x_used = None
    for h in h_exprs:
        if any(L.leq[s][e] for e in h.generators()):
            raise ParamError("h must only depend on elements below the step")
        x = _positive_point(h, L, seed)
        if x is None:
            rows.append({"h": str(h), "skipped": "h vanishes identically"})
            continue
        x_used = x_used or x
        a0, xs, al = abs(x.values[0]), x.values[s], alphas[s - 1]
        tbar = al / (a0 + al * (1 - xs))
        thresholds.append(tbar)
        hx = evaluate(h, x)
        for t in t_grid:
            z = convex_combination(x, y, 1 - t)  # t x + (1 - t) y
            member = membership(L, z.values)
            hz = evaluate(h, z)
            fz = evaluate(f, z)
            row_ok = member and hz == t * hx and hz > 0 and (t >= tbar or fz == 0)
            ok &= row_ok
            rows.append({"h": str(h), "t": str(t), "threshold": str(tbar), "h_z": str(hz),
                         "t_h_x": str(t * hx), "f_z": str(fz), "ok": row_ok})
    caveats = [f"series truncated at {N - 1} terms on chain({N}); the unbounded sequence is "
               "replaced by the elements of a finite chain"]
    return DemoReport(N, s, alphas, f_one, min(thresholds) if thresholds else Fraction(0),
                      x_used or one(L), y, rows, caveats, bool(ok))


def _positive_point(h: Expr, L: FiniteLattice, seed: int) -> DualPoint | None:
    candidates = [one(L), constant(L, -1)] + sign_vertex_points(L)
    for p in candidates:
        if evaluate(h, p) > 0:
            return p
    return None


# -- quasi-interior truncation ---------------------------------------------------------------------

@dataclass
class TruncationCertificate:
    delta: Fraction
    norm_high: Fraction
    m: int
    error: SupNormCertificate

    @property
    def passed(self) -> bool:
        return not self.error.budget_exceeded


def minimum_on_facets(u: Expr, node_budget: int = DEFAULT_NODE_BUDGET) -> Fraction:
    """Exact ``min u`` over the outer facets; for ``u >= 0`` this is the
    largest ``δ`` with ``u >= δ`` on every point of sup-norm one."""
    r = maximize(scale(-1, u), eps=0, node_budget=node_budget)
    if r.budget_exceeded:
        raise ParamError("node budget exhausted while minimising")
    return -r.value_low


def truncation_level(f: Expr, u: Expr, delta: Fraction | None = None, eps=DEFAULT_EPS) -> tuple[int, Fraction, Fraction]:
    """Smallest ``m`` of the form ``floor(||f||/δ) + 1``: then ``|f| < m u`` on
    the outer facets, so the truncation at level ``m`` reproduces ``f``."""
    if delta is None:
        delta = minimum_on_facets(u)
    if delta <= 0:
        raise ParamError("u vanishes somewhere on the dual object; it cannot truncate")
    high = sup_norm(f, eps).value_high
    return math.floor(high / delta) + 1, delta, high


def certify_truncation(f: Expr, u: Expr, eps=DEFAULT_EPS, delta: Fraction | None = None) -> TruncationCertificate:
    from .expr import qi_truncate

    m, delta, high = truncation_level(f, u, delta, eps)
    err = sup_norm(add(qi_truncate(f, u, m), scale(-1, f)), eps)
    return TruncationCertificate(delta, high, m, err)
