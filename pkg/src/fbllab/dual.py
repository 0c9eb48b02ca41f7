"""The dual object: lattice homomorphisms ``L -> [-1, 1]``.

For a finite distributive lattice every such homomorphism is determined by a
chain ``p_1 < ... < p_k`` of join-irreducibles and non-decreasing values
``v_0 <= ... <= v_k``: the element ``z`` gets ``v_{m(z)}`` where ``m(z)``
counts the ``p_i`` below ``z``.  Maximal chains give the cells; shorter
chains are faces reached by repeating coordinate values.  Each cell is the
order simplex ``-1 <= v_0 <= ... <= v_k <= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CoordinateOrderViolation,
    LatticeMismatch,
    NotADualPoint,
    NotIrreducible,
    OrderViolation,
    RangeViolation,
    TrivialLattice,
)
from .lattice import Element, FiniteLattice, LatticeHomMap, opposite_lattice

ONE = Fraction(1)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        # floats are accepted only when they are exactly representable
        return Fraction(x)
    return Fraction(x)


@dataclass(frozen=True)
class DualPoint:
    """A homomorphism ``L -> [-1, 1]`` stored as exact values indexed like ``L``.

    Use :func:`dual_point` to build one from user data; the raw constructor
    does not validate.
    """

    lattice: FiniteLattice = field(repr=False)
    values: tuple[Fraction, ...]

    def __getitem__(self, x: Element) -> Fraction:
        return self.values[self.lattice.index(x)]

    def __len__(self) -> int:
        return len(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def is_constant(self) -> bool:
        return len(set(self.values)) <= 1

    def sup_norm(self) -> Fraction:
        return max(abs(v) for v in self.values)

    def scaled(self, lam) -> "DualPoint":
        lam = as_fraction(lam)
        return DualPoint(self.lattice, tuple(lam * v for v in self.values))

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.lattice.elements, self.values))

    def to_json(self) -> dict:
        return {"values": {e: str(v) for e, v in zip(self.lattice.elements, self.values)}}


def dual_point(L: FiniteLattice, values: Mapping[str, object] | Sequence[object]) -> DualPoint:
    """Validated constructor; raises :class:`NotADualPoint` subclasses."""
    if isinstance(values, Mapping):
        try:
            vals = tuple(as_fraction(values[e]) for e in L.elements)
        except KeyError as exc:
            raise NotADualPoint(f"no value given for {exc.args[0]!r}") from None
    else:
        vals = tuple(as_fraction(v) for v in values)
        if len(vals) != len(L):
            raise NotADualPoint(f"expected {len(L)} values, got {len(vals)}")
    if any(abs(v) > 1 for v in vals):
        raise RangeViolation("dual points take values in [-1, 1]")
    if not _is_hom(L, vals):
        raise NotADualPoint("values do not define a lattice homomorphism")
    return DualPoint(L, vals)


def point_from_json(L: FiniteLattice, data: Mapping) -> DualPoint:
    return dual_point(L, data.get("values", data))


def constant(L: FiniteLattice, c=1) -> DualPoint:
    c = as_fraction(c)
    if abs(c) > 1:
        raise RangeViolation("constant outside [-1, 1]")
    return DualPoint(L, (c,) * len(L))


def one(L: FiniteLattice) -> DualPoint:
    return constant(L, 1)


def zero(L: FiniteLattice) -> DualPoint:
    return constant(L, 0)


def _is_hom(L: FiniteLattice, vals: Sequence) -> bool:
    n = len(L)
    for x in range(n):
        vx = vals[x]
        for y in range(x + 1, n):
            vy = vals[y]
            if vx >= vy:
                hi, lo = vx, vy
            else:
                hi, lo = vy, vx
            if vals[L.join[x][y]] != hi or vals[L.meet[x][y]] != lo:
                return False
    return True


def membership(L: FiniteLattice, values: Sequence | Mapping) -> bool:
    """Exact check that ``values`` is a homomorphism into ``[-1, 1]``."""
    if isinstance(values, Mapping):
        if set(values) != set(L.elements):
            return False
        values = [values[e] for e in L.elements]
    if len(values) != len(L):
        return False
    vals = [as_fraction(v) for v in values]
    return all(abs(v) <= 1 for v in vals) and _is_hom(L, vals)


def membership_batch(L: FiniteLattice, numerators: np.ndarray, denominator: int) -> np.ndarray:
    """Vectorised exact membership for rows ``numerators[i] / denominator``.

    Rows are integer arrays so comparisons are exact.
    """
    X = np.asarray(numerators)
    J, M = L.join_array, L.meet_array
    a = X[:, :, None]
    b = X[:, None, :]
    ok_join = (X[:, J] == np.maximum(a, b)).all(axis=(1, 2))
    ok_meet = (X[:, M] == np.minimum(a, b)).all(axis=(1, 2))
    in_range = (np.abs(X) <= denominator).all(axis=1)
    return ok_join & ok_meet & in_range


def common_denominator(points: Iterable[DualPoint]) -> int:
    d = 1
    for p in points:
        for v in p.values:
            d = d * v.denominator // math.gcd(d, v.denominator)
    return d


def integer_rows(points: Sequence[DualPoint], denominator: int) -> np.ndarray:
    rows = [[int(v * denominator) for v in p.values] for p in points]
    bound = denominator * 4
    dtype = np.int64 if bound < 2**60 else object
    return np.array(rows, dtype=dtype)


# -- cells -------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    """One maximal cell of the dual complex.

    ``levels[z]`` is ``m(z)``, the number of chain members below ``z``;
    coordinates ``v_0 <= ... <= v_k`` with ``k = len(chain)``.
    """

    lattice: FiniteLattice = field(repr=False)
    index: int
    chain: tuple[int, ...]
    levels: tuple[int, ...]

    @property
    def dim(self) -> int:
        """Number of coordinates, ``k + 1``."""
        return len(self.chain) + 1

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(z for z, m in enumerate(self.levels) if m == j) for j in range(self.dim)
        )

    @property
    def chain_labels(self) -> tuple[str, ...]:
        return tuple(self.lattice.elements[p] for p in self.chain)

    def point(self, coords: Sequence) -> DualPoint:
        return point_from_cell(self, coords)

    def vertices(self) -> list[tuple[Fraction, ...]]:
        """The ``k + 2`` vertices of the order simplex."""
        d = self.dim
        return [tuple([-ONE] * j + [ONE] * (d - j)) for j in range(d + 1)]

    def sign_vertices(self) -> list[tuple[Fraction, ...]]:
        """Non-zero monotone coordinate vectors with entries in {-1, 0, 1}.

        These are the vertices of the refinement of the cell by the sign
        hyperplanes ``v_j = 0``.
        """
        return [v for v in _sign_vectors(self.dim) if any(v)]

    def coords_of(self, point: DualPoint) -> tuple[Fraction, ...] | None:
        """Coordinates of ``point`` in this cell, or ``None`` if it is not in the cell."""
        v: list[Fraction | None] = [None] * self.dim
        for z, m in enumerate(self.levels):
            if v[m] is None:
                v[m] = point.values[z]
            elif v[m] != point.values[z]:
                return None
        if any(a > b for a, b in zip(v, v[1:])):
            return None
        return tuple(v)

    def describe(self) -> dict:
        L = self.lattice
        return {
            "index": self.index,
            "chain": list(self.chain_labels),
            "dim": self.dim,
            "blocks": [[L.elements[z] for z in b] for b in self.blocks],
        }


@lru_cache(maxsize=None)
def _sign_vectors(d: int) -> tuple[tuple[Fraction, ...], ...]:
    vals = (-ONE, Fraction(0), ONE)
    return tuple(combinations_with_replacement(vals, d))


def _maximal_chains(L: FiniteLattice) -> list[tuple[int, ...]]:
    irr = L.irreducibles
    if not irr:
        return [()]
    above = {p: [q for q in irr if q != p and L.leq[p][q]] for p in irr}
    # covers inside the irreducible poset
    up = {p: [q for q in above[p] if not any(r in above[p] and L.leq[r][q] and r != q for r in above[p])]
          for p in irr}
    minimal = [p for p in irr if not any(q != p and L.leq[q][p] for q in irr)]
    chains = []

    def extend(path):
        nxt = up[path[-1]]
        if not nxt:
            chains.append(tuple(path))
            return
        for q in nxt:
            extend(path + [q])

    for p in minimal:
        extend([p])
    return sorted(chains)


_CELL_CACHE: dict[FiniteLattice, tuple[Cell, ...]] = {}


def enumerate_cells(L: FiniteLattice) -> tuple[Cell, ...]:
    """One cell per maximal chain of join-irreducibles, in lexicographic chain order."""
    cached = _CELL_CACHE.get(L)
    if cached is not None and cached[0].lattice is L:
        return cached
    cells = []
    for i, ch in enumerate(_maximal_chains(L)):
        levels = tuple(sum(1 for p in ch if L.leq[p][z]) for z in range(len(L)))
        cells.append(Cell(L, i, ch, levels))
    out = tuple(cells)
    _CELL_CACHE[L] = out
    return out


def point_from_cell(cell: Cell, coords: Sequence) -> DualPoint:
    v = [as_fraction(c) for c in coords]
    if len(v) != cell.dim:
        raise CoordinateOrderViolation(f"cell needs {cell.dim} coordinates, got {len(v)}")
    if any(a > b for a, b in zip(v, v[1:])):
        raise CoordinateOrderViolation("coordinates must be non-decreasing")
    if any(abs(c) > 1 for c in v):
        raise RangeViolation("coordinates must lie in [-1, 1]")
    return DualPoint(cell.lattice, tuple(v[m] for m in cell.levels))


def locate(point: DualPoint) -> list[tuple[Cell, tuple[Fraction, ...]]]:
    """All cells containing ``point`` with the corresponding coordinates."""
    out = []
    for cell in enumerate_cells(point.lattice):
        c = cell.coords_of(point)
        if c is not None:
            out.append((cell, c))
    return out


def cell_grid_points(L: FiniteLattice, grid: Sequence) -> list[DualPoint]:
    """Distinct points obtained from every cell with monotone coordinates from ``grid``."""
    grid = sorted({as_fraction(g) for g in grid})
    seen = {}
    for cell in enumerate_cells(L):
        for v in combinations_with_replacement(grid, cell.dim):
            p = point_from_cell(cell, v)
            seen.setdefault(p.values, p)
    return list(seen.values())


def sign_vertex_points(L: FiniteLattice) -> list[DualPoint]:
    """Distinct non-zero points whose cell coordinates lie in {-1, 0, 1}."""
    seen = {}
    for cell in enumerate_cells(L):
        for v in cell.sign_vertices():
            p = point_from_cell(cell, v)
            seen.setdefault(p.values, p)
    return list(seen.values())


# -- point operations ----------------------------------------------------------

def prime_filter(L: FiniteLattice, p: Element) -> DualPoint:
    """0/1 indicator of the up-set of the join-irreducible ``p``."""
    pi = L.index(p)
    if pi not in L.irreducibles:
        raise NotIrreducible(f"{L.elements[pi]!r} is not join-irreducible in {L.name}")
    return DualPoint(L, tuple(ONE if L.leq[pi][z] else Fraction(0) for z in range(len(L))))


def pullback_hom(T: LatticeHomMap, y: DualPoint) -> DualPoint:
    """``y ∘ T`` as a point of the source lattice's dual."""
    if y.lattice != T.target:
        raise LatticeMismatch("point does not live on the target lattice of the map")
    return DualPoint(T.source, tuple(y.values[t] for t in T.table))


def negate_point(x: DualPoint) -> DualPoint:
    """``-x`` as a point of the opposite lattice's dual."""
    return DualPoint(opposite_lattice(x.lattice), tuple(-v for v in x.values))


def separation_witness(L: FiniteLattice, x: Element, y: Element) -> DualPoint:
    """A point with value 0 at ``x``, 1 at ``y`` and values in [0, 1].

    Requires ``y`` not below ``x``; uses the prime filter of an irreducible
    below ``y`` but not below ``x``.
    """
    xi, yi = L.index(x), L.index(y)
    if L.leq[yi][xi]:
        raise OrderViolation(f"{L.elements[yi]!r} is below {L.elements[xi]!r}")
    for p in L.irreducibles:
        if L.leq[p][yi] and not L.leq[p][xi]:
            return prime_filter(L, p)
    raise AssertionError("unreachable: distributive lattices have enough irreducibles")


def nonconstant_hom(L: FiniteLattice) -> DualPoint:
    if len(L) < 2:
        raise TrivialLattice("a one-element lattice has only constant homomorphisms")
    return prime_filter(L, L.irreducibles[0])


def convex_combination(u: DualPoint, w: DualPoint, t) -> DualPoint:
    t = as_fraction(t)
    if u.lattice != w.lattice:
        raise LatticeMismatch("points live on different lattices")
    return DualPoint(u.lattice, tuple((1 - t) * a + t * b for a, b in zip(u.values, w.values)))


@dataclass
class PathReport:
    ok: bool
    steps: int
    checked: int
    first_failure: dict | None = None


def affine_path_check(u: DualPoint, w: DualPoint, steps: int) -> PathReport:
    """Check ``(1 - t) u + t w`` on the grid ``t = i / steps`` for membership and non-vanishing."""
    if u.lattice != w.lattice:
        raise LatticeMismatch("points live on different lattices")
    if steps < 1:
        raise ValueError("steps must be positive")
    L = u.lattice
    d = common_denominator([u, w])
    U = np.array([int(v * d) for v in u.values], dtype=object)
    W = np.array([int(v * d) for v in w.values], dtype=object)
    i = np.arange(steps + 1, dtype=object)[:, None]
    rows = (steps - i) * U[None, :] + i * W[None, :]
    denom = steps * d
    if denom * 4 < 2**60:
        rows = rows.astype(np.int64)
    member = membership_batch(L, rows, denom)
    nonzero = (rows != 0).any(axis=1)
    bad = np.flatnonzero(~(member & nonzero))
    if len(bad):
        k = int(bad[0])
        reason = "not a homomorphism" if not member[k] else "zero function"
        return PathReport(False, steps, steps + 1,
                          {"step": k, "t": str(Fraction(k, steps)), "reason": reason})
    return PathReport(True, steps, steps + 1)


# -- sampling ------------------------------------------------------------------

@dataclass(frozen=True)
class DualSample:
    points: tuple[DualPoint, ...]
    provenance: tuple[tuple[int, tuple[Fraction, ...]], ...]
    seed: int
    denominator: int

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def sample_points(L: FiniteLattice, n: int, seed: int = 0, denominator: int = 2**12) -> DualSample:
    """``n`` points: a uniformly chosen cell, then uniform monotone coordinates.

    Coordinates are drawn from the grid ``-1 + 2 i / denominator`` so all
    values are exact rationals.  Deterministic for a given seed.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    cells = enumerate_cells(L)
    rng = np.random.default_rng(seed)
    which = rng.integers(0, len(cells), size=n)
    pts, prov = [], []
    for ci in which:
        cell = cells[int(ci)]
        raw = np.sort(rng.integers(0, denominator + 1, size=cell.dim))
        coords = tuple(Fraction(2 * int(r) - denominator, denominator) for r in raw)
        pts.append(DualPoint(L, tuple(coords[m] for m in cell.levels)))
        prov.append((int(ci), coords))
    return DualSample(tuple(pts), tuple(prov), seed, denominator)


def sample_zero_set(L: FiniteLattice, element: Element, n: int, seed: int = 0,
                    denominator: int = 2**12) -> list[DualPoint]:
    """Points with value 0 at ``element``."""
    e = L.index(element)
    cells = enumerate_cells(L)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        cell = cells[int(rng.integers(0, len(cells)))]
        j = cell.levels[e]
        below = np.sort(rng.integers(-denominator, 1, size=j))
        above = np.sort(rng.integers(0, denominator + 1, size=cell.dim - j - 1))
        coords = [Fraction(int(r), denominator) for r in below] + [Fraction(0)] + \
                 [Fraction(int(r), denominator) for r in above]
        out.append(point_from_cell(cell, coords))
    return out


def random_point(L: FiniteLattice, rng: np.random.Generator, denominator: int = 2**12) -> DualPoint:
    cells = enumerate_cells(L)
    cell = cells[int(rng.integers(0, len(cells)))]
    raw = np.sort(rng.integers(0, denominator + 1, size=cell.dim))
    coords = [Fraction(2 * int(r) - denominator, denominator) for r in raw]
    return point_from_cell(cell, coords)
