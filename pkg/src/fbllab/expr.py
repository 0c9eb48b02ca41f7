"""Symbolic elements of the free vector lattice: lattice-linear combinations of
the evaluations ``δ_x``.

An :class:`Expr` is an immutable tree.  Python operators build it::

    d0, d1 = gen(L, "0"), gen(L, "1")
    f = abs(d0) | abs(d1)           # sup
    g = (d0 - 2 * d1).pos() & d0    # inf

Evaluation at a :class:`~fbllab.dual.DualPoint` is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .dual import DualPoint, as_fraction
from .errors import (
    EmptySeparatingSet,
    LatticeMismatch,
    MissingParam,
    ParamError,
    UnknownName,
)
from .lattice import BOTTOM_LABEL, Element, FiniteLattice, LatticeHomMap, opposite_lattice

OPS = ("gen", "scale", "add", "sup", "inf", "abs", "pos")


@dataclass(frozen=True)
class Expr:
    op: str
    args: tuple["Expr", ...] = ()
    elem: int | None = None
    coef: Fraction | None = None
    lattice: FiniteLattice = field(default=None, repr=False)

    # -- operators ---------------------------------------------------------
    def __add__(self, other: "Expr") -> "Expr":
        return add(self, other)

    def __sub__(self, other: "Expr") -> "Expr":
        return add(self, scale(-1, other))

    def __neg__(self) -> "Expr":
        return scale(-1, self)

    def __mul__(self, c) -> "Expr":
        if isinstance(c, Expr):
            return NotImplemented
        return scale(c, self)

    __rmul__ = __mul__

    def __or__(self, other: "Expr") -> "Expr":
        return sup(self, other)

    def __and__(self, other: "Expr") -> "Expr":
        return inf(self, other)

    def __abs__(self) -> "Expr":
        return absolute(self)

    def pos(self) -> "Expr":
        return positive_part(self)

    def __call__(self, point: DualPoint) -> Fraction:
        return evaluate(self, point)

    def __str__(self) -> str:
        return to_string(self)

    def size(self) -> int:
        return 1 + sum(a.size() for a in self.args)

    def generators(self) -> frozenset[int]:
        if self.op == "gen":
            return frozenset((self.elem,))
        out = frozenset()
        for a in self.args:
            out |= a.generators()
        return out


def _same_lattice(*exprs: Expr) -> FiniteLattice:
    L = exprs[0].lattice
    for e in exprs[1:]:
        if e.lattice != L:
            raise LatticeMismatch("expressions live over different lattices")
    return L


def gen(L: FiniteLattice, x: Element) -> Expr:
    return Expr("gen", elem=L.index(x), lattice=L)


def scale(c, f: Expr) -> Expr:
    return Expr("scale", (f,), coef=as_fraction(c), lattice=f.lattice)


def add(f: Expr, g: Expr) -> Expr:
    return Expr("add", (f, g), lattice=_same_lattice(f, g))


def sup(f: Expr, g: Expr) -> Expr:
    return Expr("sup", (f, g), lattice=_same_lattice(f, g))


def inf(f: Expr, g: Expr) -> Expr:
    return Expr("inf", (f, g), lattice=_same_lattice(f, g))


def absolute(f: Expr) -> Expr:
    return Expr("abs", (f,), lattice=f.lattice)


def positive_part(f: Expr) -> Expr:
    return Expr("pos", (f,), lattice=f.lattice)


def zero_expr(L: FiniteLattice) -> Expr:
    return scale(0, gen(L, 0))


def total(terms: Iterable[Expr]) -> Expr:
    terms = list(terms)
    if not terms:
        raise ValueError("empty sum")
    acc = terms[0]
    for t in terms[1:]:
        acc = add(acc, t)
    return acc


def sup_all(terms: Iterable[Expr]) -> Expr:
    terms = list(terms)
    acc = terms[0]
    for t in terms[1:]:
        acc = sup(acc, t)
    return acc


# -- evaluation ------------------------------------------------------------------

def evaluate(f: Expr, point: DualPoint) -> Fraction:
    """Exact value of ``f`` at ``point``."""
    if point.lattice != f.lattice:
        raise LatticeMismatch("expression and point live over different lattices")
    return _eval(f, point.values, {})


def evaluate_values(f: Expr, values: Sequence) -> Fraction:
    """Evaluate at a raw value vector (no lattice check)."""
    return _eval(f, values, {})


def _eval(f: Expr, vals, memo: dict):
    key = id(f)
    hit = memo.get(key)
    if hit is not None:
        return hit
    op = f.op
    if op == "gen":
        r = vals[f.elem]
    elif op == "scale":
        r = f.coef * _eval(f.args[0], vals, memo)
    elif op == "add":
        r = _eval(f.args[0], vals, memo) + _eval(f.args[1], vals, memo)
    elif op == "sup":
        r = max(_eval(f.args[0], vals, memo), _eval(f.args[1], vals, memo))
    elif op == "inf":
        r = min(_eval(f.args[0], vals, memo), _eval(f.args[1], vals, memo))
    elif op == "abs":
        r = abs(_eval(f.args[0], vals, memo))
    elif op == "pos":
        r = max(_eval(f.args[0], vals, memo), 0)
    else:
        raise ValueError(f"unknown node {op!r}")
    memo[key] = r
    return r


def evaluate_batch(f: Expr, values: np.ndarray) -> np.ndarray:
    """Float evaluation on the rows of ``values`` (shape ``(N, |L|)``).

    Used only by heuristic searches; every reported number is recomputed
    exactly with :func:`evaluate`.
    """
    memo: dict = {}

    def go(e: Expr):
        k = id(e)
        if k in memo:
            return memo[k]
        op = e.op
        if op == "gen":
            r = values[:, e.elem]
        elif op == "scale":
            r = float(e.coef) * go(e.args[0])
        elif op == "add":
            r = go(e.args[0]) + go(e.args[1])
        elif op == "sup":
            r = np.maximum(go(e.args[0]), go(e.args[1]))
        elif op == "inf":
            r = np.minimum(go(e.args[0]), go(e.args[1]))
        elif op == "abs":
            r = np.abs(go(e.args[0]))
        else:
            r = np.maximum(go(e.args[0]), 0.0)
        memo[k] = r
        return r

    return go(f)


@dataclass(frozen=True)
class LipschitzBound:
    value: Fraction


def lipschitz(f: Expr) -> LipschitzBound:
    """Structural Lipschitz constant for the coordinate sup-metric."""
    memo: dict = {}

    def go(e: Expr) -> Fraction:
        k = id(e)
        if k in memo:
            return memo[k]
        if e.op == "gen":
            r = Fraction(1)
        elif e.op == "scale":
            r = abs(e.coef) * go(e.args[0])
        elif e.op == "add":
            r = go(e.args[0]) + go(e.args[1])
        elif e.op in ("sup", "inf"):
            r = max(go(e.args[0]), go(e.args[1]))
        else:
            r = go(e.args[0])
        memo[k] = r
        return r

    return LipschitzBound(go(f))


# -- transformations ----------------------------------------------------------------

def substitute(f: Expr, leaf: Callable[[Expr], Expr], lattice: FiniteLattice) -> Expr:
    """Rebuild ``f`` over ``lattice`` replacing every generator by ``leaf(gen)``."""
    memo: dict = {}

    def go(e: Expr) -> Expr:
        k = id(e)
        if k in memo:
            return memo[k]
        if e.op == "gen":
            r = leaf(e)
        else:
            args = tuple(go(a) for a in e.args)
            r = Expr(e.op, args, coef=e.coef, lattice=lattice)
        memo[k] = r
        return r

    return go(f)


def induce_operator(T: LatticeHomMap, f: Expr) -> Expr:
    """Image of ``f`` under the Banach lattice homomorphism induced by ``T``:
    every ``δ_x`` becomes ``δ_{T(x)}``."""
    if f.lattice != T.source:
        raise LatticeMismatch("expression does not live over the source lattice")
    M = T.target
    return substitute(f, lambda g: Expr("gen", elem=T.table[g.elem], lattice=M), M)


def phi_extract(op: Callable[[Expr], Expr], source: FiniteLattice, point: DualPoint) -> tuple[Fraction, ...]:
    """The map ``x -> (op δ_x)(point)`` on the source lattice."""
    return tuple(evaluate(op(gen(source, x)), point) for x in range(len(source)))


def _negated_form(f: Expr, Lop: FiniteLattice) -> Expr:
    # returns g over L^op with g(y) = -f(-y)
    memo: dict = {}

    def go(e: Expr) -> Expr:
        k = id(e)
        if k in memo:
            return memo[k]
        op = e.op
        if op == "gen":
            r = Expr("gen", elem=e.elem, lattice=Lop)
        elif op == "scale":
            r = scale(e.coef, go(e.args[0]))
        elif op == "add":
            r = add(go(e.args[0]), go(e.args[1]))
        elif op == "sup":
            r = inf(go(e.args[0]), go(e.args[1]))
        elif op == "inf":
            r = sup(go(e.args[0]), go(e.args[1]))
        elif op == "abs":
            r = scale(-1, absolute(go(e.args[0])))
        else:
            # -max(a, 0) = min(-a, 0) = -pos(a)
            r = scale(-1, positive_part(scale(-1, go(e.args[0]))))
        memo[k] = r
        return r

    return go(f)


def opposite_expr(f: Expr) -> Expr:
    """Transport ``f`` to the opposite lattice: the result ``h`` satisfies
    ``h(-x) = f(x)`` for every dual point ``x`` of ``L``."""
    Lop = opposite_lattice(f.lattice)
    return scale(-1, _negated_form(f, Lop))


# -- named constructions ----------------------------------------------------------------

def quasi_interior_point(L: FiniteLattice, separating: Sequence[Element] | None = None,
                         weights: Sequence | None = None) -> Expr:
    """``u = Σ w_n |δ_{s_n}|``; defaults to all elements with weights ``2^-n``."""
    S = list(L.elements) if separating is None else list(separating)
    if not S:
        raise EmptySeparatingSet("a quasi-interior point needs a non-empty separating set")
    if weights is None:
        weights = [Fraction(1, 2 ** (n + 1)) for n in range(len(S))]
    weights = [as_fraction(w) for w in weights]
    if len(weights) != len(S):
        raise ParamError("one weight per separating element is required")
    if any(w <= 0 for w in weights):
        raise ParamError("weights must be positive")
    if sum(weights) > 1:
        raise ParamError("weights must sum to at most 1")
    return total(scale(w, absolute(gen(L, s))) for w, s in zip(weights, S))


def qi_truncate(f: Expr, u: Expr, m: int) -> Expr:
    """``(f ∧ m u) ∨ (-m u)``."""
    _same_lattice(f, u)
    if m < 0:
        raise ParamError("m must be non-negative")
    mu = scale(m, u)
    return sup(inf(f, mu), scale(-1, mu))


def density_family_function(L: FiniteLattice, gamma: int, a: Element = BOTTOM_LABEL,
                            b: Element = "{}") -> Expr:
    """``((δ_a + δ_{γ}) ∨ δ_a) ∧ δ_b`` on a bottomed powerset."""
    singleton = "{" + str(gamma) + "}"
    da, db = gen(L, a), gen(L, b)
    return inf(sup(add(da, gen(L, singleton)), da), db)


def strong_unit_candidate(L: FiniteLattice) -> Expr:
    return sup(absolute(gen(L, L.bottom)), absolute(gen(L, L.top)))


def order_density_function(L: FiniteLattice, sequence: Sequence[Element] | None = None,
                           alphas: Sequence | None = None) -> Expr:
    """``(|δ_{u_0}| - Σ_{n>=1} α_n |δ_{u_n}|)_+`` with ``α_n = 2^{-n-1}`` by default."""
    seq = list(L.elements) if sequence is None else list(sequence)
    if len(seq) < 2:
        raise ParamError("the sequence needs at least two elements")
    if alphas is None:
        alphas = [Fraction(1, 2 ** (n + 1)) for n in range(1, len(seq))]
    alphas = [as_fraction(a) for a in alphas]
    if len(alphas) != len(seq) - 1:
        raise ParamError("one coefficient per element after the first is required")
    tail = total(scale(a, absolute(gen(L, u))) for a, u in zip(alphas, seq[1:]))
    return positive_part(add(absolute(gen(L, seq[0])), scale(-1, tail)))


_NAMED = {
    "density_family": (density_family_function, ("gamma",)),
    "strong_unit": (strong_unit_candidate, ()),
    "order_density": (order_density_function, ()),
}


def named_function(name: str, L: FiniteLattice, **params) -> Expr:
    """Build one of the named constructions: ``density_family`` (needs
    ``gamma``), ``strong_unit`` or ``order_density``."""
    try:
        fn, required = _NAMED[name]
    except KeyError:
        raise UnknownName(f"unknown function {name!r}; known: {sorted(_NAMED)}") from None
    missing = [p for p in required if p not in params]
    if missing:
        raise MissingParam(f"{name} needs parameter(s) {missing}")
    return fn(L, **params)


def random_expr(L: FiniteLattice, rng: np.random.Generator, depth: int = 3,
                elements: Sequence[Element] | None = None) -> Expr:
    """A random lattice-linear expression over ``elements`` (default: all of ``L``)."""
    pool = [L.index(x) for x in (elements if elements is not None else range(len(L)))]
    coefs = [Fraction(c) for c in (-2, -1, Fraction(-1, 2), Fraction(1, 2), 1, 2, 3)]

    def go(d: int) -> Expr:
        if d == 0 or rng.random() < 0.25:
            return gen(L, pool[int(rng.integers(len(pool)))])
        kind = int(rng.integers(6))
        if kind == 0:
            return scale(coefs[int(rng.integers(len(coefs)))], go(d - 1))
        if kind == 1:
            return add(go(d - 1), go(d - 1))
        if kind == 2:
            return sup(go(d - 1), go(d - 1))
        if kind == 3:
            return inf(go(d - 1), go(d - 1))
        if kind == 4:
            return absolute(go(d - 1))
        return positive_part(go(d - 1))

    return go(depth)


# -- serialisation -------------------------------------------------------------------------

def to_json(f: Expr) -> dict:
    L = f.lattice
    if f.op == "gen":
        return {"op": "gen", "elem": L.elements[f.elem]}
    if f.op == "scale":
        return {"op": "scale", "coef": str(f.coef), "arg": to_json(f.args[0])}
    if f.op in ("add", "sup", "inf"):
        return {"op": f.op, "args": [to_json(a) for a in f.args]}
    return {"op": f.op, "arg": to_json(f.args[0])}


def from_json(L: FiniteLattice, data: Mapping) -> Expr:
    try:
        op = data["op"]
        if op == "gen":
            return gen(L, data["elem"])
        if op == "scale":
            return scale(Fraction(str(data["coef"])), from_json(L, data["arg"]))
        if op in ("add", "sup", "inf"):
            args = [from_json(L, a) for a in data["args"]]
            if len(args) < 2:
                raise ParamError(f"{op} needs at least two arguments")
            combine = {"add": add, "sup": sup, "inf": inf}[op]
            acc = args[0]
            for a in args[1:]:
                acc = combine(acc, a)
            return acc
        if op == "abs":
            return absolute(from_json(L, data["arg"]))
        if op == "pos":
            return positive_part(from_json(L, data["arg"]))
    except KeyError as exc:
        raise ParamError(f"expression JSON is missing field {exc.args[0]!r}") from None
    raise ParamError(f"unknown expression node {op!r}")


def to_string(f: Expr) -> str:
    L = f.lattice
    op = f.op
    if op == "gen":
        return f"δ[{L.elements[f.elem]}]"
    if op == "scale":
        return f"{f.coef}·{to_string(f.args[0])}"
    if op == "add":
        return f"({to_string(f.args[0])} + {to_string(f.args[1])})"
    if op == "sup":
        return f"({to_string(f.args[0])} ∨ {to_string(f.args[1])})"
    if op == "inf":
        return f"({to_string(f.args[0])} ∧ {to_string(f.args[1])})"
    if op == "abs":
        return f"|{to_string(f.args[0])}|"
    return f"({to_string(f.args[0])})₊"
