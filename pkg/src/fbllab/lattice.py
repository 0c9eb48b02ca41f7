"""Finite distributive lattices, their homomorphisms and the built-in families.

Elements carry string labels; internally everything works on integer
indices into ``FiniteLattice.elements``.  Public functions accept either a
label or an index wherever an element is expected.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import (
    CyclicOrder,
    LatticeError,
    NotAHomomorphism,
    NotALattice,
    NotDistributive,
    OrderViolation,
    ParamError,
)

Element = Union[str, int]


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    """A validated finite distributive lattice.

    ``leq[i][j]`` is true iff ``elements[i] <= elements[j]``; ``meet`` and
    ``join`` are index tables.  Instances are only produced by
    :func:`build_lattice` (or derived constructions that preserve the
    invariants), so the tables are always consistent.
    """

    elements: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    irreducibles: tuple[int, ...]
    name: str = field(default="lattice")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.elements == other.elements and self.leq == other.leq

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.elements, self.leq))

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteLattice({self.name!r}, {len(self)} elements)"

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.elements)}

    def index(self, x: Element) -> int:
        if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
            if not 0 <= x < len(self.elements):
                raise LatticeError(f"index {x} out of range for {self.name}")
            return int(x)
        try:
            return self._positions[x]
        except KeyError:
            raise LatticeError(f"{x!r} is not an element of {self.name}") from None

    def label(self, i: int) -> str:
        return self.elements[i]

    def le(self, x: Element, y: Element) -> bool:
        return self.leq[self.index(x)][self.index(y)]

    def meet_of(self, x: Element, y: Element) -> str:
        return self.elements[self.meet[self.index(x)][self.index(y)]]

    def join_of(self, x: Element, y: Element) -> str:
        return self.elements[self.join[self.index(x)][self.index(y)]]

    @cached_property
    def bottom(self) -> int:
        return _extreme(self.meet)

    @cached_property
    def top(self) -> int:
        return _extreme(self.join)

    @cached_property
    def lower_covers(self) -> tuple[tuple[int, ...], ...]:
        n = len(self)
        out = []
        for y in range(n):
            below = [x for x in range(n) if x != y and self.leq[x][y]]
            out.append(tuple(
                x for x in below
                if not any(z != x and self.leq[x][z] for z in below)
            ))
        return tuple(out)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Hasse diagram as (lower, upper) index pairs."""
        return tuple((x, y) for y, xs in enumerate(self.lower_covers) for x in xs)

    @cached_property
    def meet_array(self) -> np.ndarray:
        return np.array(self.meet, dtype=np.intp).reshape(len(self), len(self))

    @cached_property
    def join_array(self) -> np.ndarray:
        return np.array(self.join, dtype=np.intp).reshape(len(self), len(self))

    @property
    def irreducible_labels(self) -> tuple[str, ...]:
        return tuple(self.elements[p] for p in self.irreducibles)

    def is_chain(self) -> bool:
        n = len(self)
        return all(self.leq[i][j] or self.leq[j][i] for i in range(n) for j in range(n))

    def describe(self) -> dict:
        return {"name": self.name, "size": len(self), "elements": list(self.elements)}


def _extreme(table) -> int:
    # the absorbing element of a meet (resp. join) table is the bottom (resp. top)
    n = len(table)
    acc = 0
    for i in range(1, n):
        acc = table[acc][i]
    return acc


@dataclass(frozen=True)
class LatticeSpec:
    """Unvalidated input description of a lattice (the JSON file format)."""

    elements: tuple[str, ...]
    order: tuple[tuple[str, str], ...]
    order_kind: str = "covers"
    name: str = "lattice"

    def build(self) -> FiniteLattice:
        return build_lattice(self.elements, self.order, order_kind=self.order_kind, name=self.name)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "elements": list(self.elements),
            "order": [list(p) for p in self.order],
            "order_kind": self.order_kind,
        }


def build_lattice(
    elements: Sequence[str],
    order: Iterable[Sequence[str]],
    *,
    order_kind: str = "covers",
    name: str = "lattice",
) -> FiniteLattice:
    """Validate an order and return the corresponding distributive lattice.

    ``order`` may list cover pairs or arbitrary comparable pairs; the
    reflexive-transitive closure is recomputed either way, so both forms
    give identical lattices.  Raises :class:`CyclicOrder`,
    :class:`NotALattice` or :class:`NotDistributive`.
    """
    if order_kind not in ("covers", "leq"):
        raise ParamError(f"order_kind must be 'covers' or 'leq', got {order_kind!r}")
    elements = tuple(str(e) for e in elements)
    if not elements:
        raise LatticeError("a lattice needs at least one element")
    if len(set(elements)) != len(elements):
        raise LatticeError("element labels must be distinct")
    pos = {e: i for i, e in enumerate(elements)}
    n = len(elements)

    rel = np.eye(n, dtype=bool)
    for pair in order:
        a, b = pair
        if a not in pos or b not in pos:
            raise LatticeError(f"order pair ({a!r}, {b!r}) mentions an unknown element")
        rel[pos[a], pos[b]] = True
    for k in range(n):
        rel |= rel[:, [k]] & rel[[k], :]
    both = rel & rel.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise CyclicOrder((elements[i], elements[j]))

    meet = _bound_table(rel, elements, lower=True)
    join = _bound_table(rel, elements, lower=False)

    M = np.array(meet)
    J = np.array(join)
    lhs = M[np.arange(n)[:, None, None], J[None, :, :]]  # x ∧ (y ∨ z)
    rhs = J[M[:, :, None], M[:, None, :]]  # (x∧y) ∨ (x∧z)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        x, y, z = map(int, bad[0])
        raise NotDistributive((elements[x], elements[y], elements[z]))

    leq = tuple(tuple(bool(v) for v in row) for row in rel)
    lattice = FiniteLattice(
        elements=elements,
        leq=leq,
        meet=tuple(tuple(r) for r in meet),
        join=tuple(tuple(r) for r in join),
        irreducibles=(),
        name=name,
    )
    irr = tuple(i for i, lc in enumerate(lattice.lower_covers) if len(lc) == 1)
    object.__setattr__(lattice, "irreducibles", irr)
    return lattice


def _bound_table(rel: np.ndarray, elements, lower: bool) -> list[list[int]]:
    n = len(elements)
    table = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            if lower:
                cand = np.flatnonzero(rel[:, i] & rel[:, j])
                best = [c for c in cand if rel[cand, c].all()]
            else:
                cand = np.flatnonzero(rel[i, :] & rel[j, :])
                best = [c for c in cand if rel[c, cand].all()]
            if not best:
                raise NotALattice((elements[i], elements[j]), "meet" if lower else "join")
            table[i][j] = table[j][i] = int(best[0])
    return table


def join_irreducible_decomposition(L: FiniteLattice, z: Element) -> frozenset[str]:
    """Irreducibles below ``z``; their join is ``z`` (bottom for the empty set)."""
    zi = L.index(z)
    return frozenset(L.elements[p] for p in L.irreducibles if L.leq[p][zi])


def join_all(L: FiniteLattice, xs: Iterable[Element]) -> str:
    acc = L.bottom
    for x in xs:
        acc = L.join[acc][L.index(x)]
    return L.elements[acc]


def opposite_lattice(L: FiniteLattice) -> FiniteLattice:
    """Same carrier with the order reversed; meet and join swap."""
    n = len(L)
    leq = tuple(tuple(L.leq[j][i] for j in range(n)) for i in range(n))
    name = L.name[:-3] if L.name.endswith("^op") else L.name + "^op"
    op = FiniteLattice(L.elements, leq, L.join, L.meet, (), name)
    irr = tuple(i for i, lc in enumerate(op.lower_covers) if len(lc) == 1)
    object.__setattr__(op, "irreducibles", irr)
    return op


def sublattice(L: FiniteLattice, carrier: Iterable[Element], name: str | None = None) -> FiniteLattice:
    """The sublattice of ``L`` on ``carrier`` (must be closed under meet and join)."""
    idx = sorted({L.index(x) for x in carrier})
    s = set(idx)
    for i in idx:
        for j in idx:
            if L.meet[i][j] not in s or L.join[i][j] not in s:
                raise LatticeError("carrier is not closed under meet and join")
    labels = [L.elements[i] for i in idx]
    pairs = [(L.elements[i], L.elements[j]) for i in idx for j in idx if L.leq[i][j]]
    return build_lattice(labels, pairs, order_kind="leq", name=name or f"sub({L.name})")


def are_isomorphic(L: FiniteLattice, M: FiniteLattice) -> bool:
    """Exhaustive bijection search (desk scale only)."""
    if len(L) != len(M) or len(L.covers) != len(M.covers):
        return False
    n = len(L)
    for perm in itertools.permutations(range(n)):
        if all(L.leq[i][j] == M.leq[perm[i]][perm[j]] for i in range(n) for j in range(n)):
            return True
    return False


# -- homomorphisms -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LatticeHomMap:
    """A lattice homomorphism, stored as a table of target indices."""

    source: FiniteLattice
    target: FiniteLattice
    table: tuple[int, ...]

    def __post_init__(self):
        s, t, f = self.source, self.target, self.table
        if len(f) != len(s):
            raise NotAHomomorphism("map table must cover every source element")
        for x in range(len(s)):
            for y in range(x + 1, len(s)):
                if f[s.join[x][y]] != t.join[f[x]][f[y]]:
                    raise NotAHomomorphism(
                        f"join of {s.elements[x]!r}, {s.elements[y]!r} is not preserved")
                if f[s.meet[x][y]] != t.meet[f[x]][f[y]]:
                    raise NotAHomomorphism(
                        f"meet of {s.elements[x]!r}, {s.elements[y]!r} is not preserved")

    def __eq__(self, other):
        if not isinstance(other, LatticeHomMap):
            return NotImplemented
        return (self.source, self.target, self.table) == (other.source, other.target, other.table)

    def __hash__(self):
        return hash((self.source, self.target, self.table))

    def __call__(self, x: Element) -> str:
        return self.target.elements[self.table[self.source.index(x)]]

    def index_map(self, i: int) -> int:
        return self.table[i]

    def compose(self, inner: "LatticeHomMap") -> "LatticeHomMap":
        """``self ∘ inner``."""
        if inner.target != self.source:
            raise NotAHomomorphism("composition needs matching lattices")
        return LatticeHomMap(inner.source, self.target,
                             tuple(self.table[inner.table[i]] for i in range(len(inner.source))))

    def as_dict(self) -> dict[str, str]:
        return {self.source.elements[i]: self.target.elements[j] for i, j in enumerate(self.table)}


def lattice_hom(source: FiniteLattice, target: FiniteLattice,
                mapping: Mapping[str, str] | Sequence[Element]) -> LatticeHomMap:
    if isinstance(mapping, Mapping):
        missing = [e for e in source.elements if e not in mapping]
        if missing:
            raise NotAHomomorphism(f"map is undefined on {missing}")
        table = tuple(target.index(mapping[e]) for e in source.elements)
    else:
        table = tuple(target.index(v) for v in mapping)
    return LatticeHomMap(source, target, table)


def identity_hom(L: FiniteLattice) -> LatticeHomMap:
    return LatticeHomMap(L, L, tuple(range(len(L))))


def inclusion_hom(sub: FiniteLattice, parent: FiniteLattice) -> LatticeHomMap:
    return LatticeHomMap(sub, parent, tuple(parent.index(e) for e in sub.elements))


def is_surjective(T: LatticeHomMap) -> bool:
    return set(T.table) == set(range(len(T.target)))


def is_injective(T: LatticeHomMap) -> bool:
    return len(set(T.table)) == len(T.table)


@dataclass(frozen=True, eq=False)
class IntervalSublattice:
    parent: FiniteLattice
    a: int
    b: int
    lattice: FiniteLattice

    @property
    def carrier(self) -> tuple[str, ...]:
        return self.lattice.elements


def interval(L: FiniteLattice, a: Element, b: Element) -> IntervalSublattice:
    ai, bi = L.index(a), L.index(b)
    if not L.leq[ai][bi]:
        raise OrderViolation(f"{L.elements[ai]!r} is not below {L.elements[bi]!r}")
    carrier = [x for x in range(len(L)) if L.leq[ai][x] and L.leq[x][bi]]
    sub = sublattice(L, carrier, name=f"[{L.elements[ai]},{L.elements[bi]}]")
    return IntervalSublattice(L, ai, bi, sub)


def interval_retraction(L: FiniteLattice, a: Element, b: Element) -> tuple[LatticeHomMap, LatticeHomMap]:
    """Inclusion of ``[a, b]`` into ``L`` and the retraction ``x -> a ∨ (x ∧ b)``."""
    I = interval(L, a, b)
    inc = inclusion_hom(I.lattice, L)
    table = tuple(I.lattice.index(L.elements[L.join[I.a][L.meet[x][I.b]]]) for x in range(len(L)))
    return inc, LatticeHomMap(L, I.lattice, table)


# -- built-in families --------------------------------------------------------

def chain(n: int) -> FiniteLattice:
    """The chain ``0 < 1 < ... < n-1``."""
    if n < 1:
        raise ParamError("chain length must be positive")
    labels = [str(i) for i in range(n)]
    return build_lattice(labels, zip(labels, labels[1:]), name=f"chain({n})")


def _subset_label(mask: int) -> str:
    return "{" + ",".join(str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1) + "}"


def powerset(n: int) -> FiniteLattice:
    """Subsets of ``{1..n}`` ordered by inclusion, labelled ``{}``, ``{1}``, ``{1,2}``, ..."""
    if n < 0:
        raise ParamError("powerset size must be non-negative")
    masks = range(1 << n)
    labels = [_subset_label(m) for m in masks]
    covers = [(labels[m], labels[m | 1 << i]) for m in masks for i in range(n) if not m >> i & 1]
    return build_lattice(labels, covers, name=f"powerset({n})")


BOTTOM_LABEL = "0hat"


def bottomed_powerset(n: int) -> FiniteLattice:
    """``powerset(n)`` with a new least element ``0hat`` adjoined below ``{}``."""
    P = powerset(n)
    covers = [(BOTTOM_LABEL, "{}")] + [(P.elements[x], P.elements[y]) for x, y in P.covers]
    return build_lattice((BOTTOM_LABEL,) + P.elements, covers, name=f"bottomed_powerset({n})")


def five_point() -> FiniteLattice:
    """``0 < a < b, c < 1`` with ``b ∧ c = a`` and ``b ∨ c = 1``."""
    return build_lattice(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "b"), ("a", "c"), ("b", "1"), ("c", "1")],
        name="five_point",
    )


def square() -> FiniteLattice:
    """``{0, a, b, 1}`` with ``a ∧ b = 0`` and ``a ∨ b = 1``."""
    return build_lattice(
        ["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")], name="square")


def diamond() -> LatticeSpec:
    """M3 as an input description; it is rejected by :func:`build_lattice`."""
    return LatticeSpec(
        ("0", "x", "y", "z", "1"),
        (("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")),
        name="diamond",
    )


def pentagon() -> LatticeSpec:
    """N5 as an input description; it is rejected by :func:`build_lattice`."""
    return LatticeSpec(
        ("0", "a", "b", "c", "1"),
        (("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")),
        name="pentagon",
    )


def product(L: FiniteLattice, M: FiniteLattice) -> FiniteLattice:
    labels = [f"({x},{y})" for x in L.elements for y in M.elements]
    m = len(M)
    pairs = [
        (labels[i * m + j], labels[k * m + l])
        for i in range(len(L)) for j in range(m)
        for k in range(len(L)) for l in range(m)
        if L.leq[i][k] and M.leq[j][l]
    ]
    return build_lattice(labels, pairs, order_kind="leq", name=f"{L.name}x{M.name}")


_FAMILIES = {
    "chain": chain,
    "powerset": powerset,
    "bottomed_powerset": bottomed_powerset,
    "five_point": five_point,
    "square": square,
}


def builtin(descriptor: str) -> FiniteLattice:
    """Parse ``chain(4)``, ``powerset:2``, ``five_point`` and similar names."""
    m = re.fullmatch(r"\s*([a-z_]+)\s*(?:[(:]\s*(\d+)\s*\)?)?\s*", descriptor)
    if not m or m.group(1) not in _FAMILIES:
        raise ParamError(f"unknown built-in lattice {descriptor!r}; "
                         f"known: {', '.join(sorted(_FAMILIES))}")
    fam, arg = m.groups()
    return _FAMILIES[fam](int(arg)) if arg is not None else _FAMILIES[fam]()


# -- JSON ---------------------------------------------------------------------

def lattice_spec_from_json(data: Mapping) -> LatticeSpec:
    try:
        return LatticeSpec(
            elements=tuple(data["elements"]),
            order=tuple(tuple(p) for p in data["order"]),
            order_kind=data.get("order_kind", "covers"),
            name=data.get("name", "lattice"),
        )
    except KeyError as exc:
        raise ParamError(f"lattice JSON is missing field {exc.args[0]!r}") from None


def lattice_to_json(L: FiniteLattice) -> dict:
    return {
        "name": L.name,
        "elements": list(L.elements),
        "order": [[L.elements[x], L.elements[y]] for x, y in L.covers],
        "order_kind": "covers",
    }


def load_lattice(source: str | Path) -> FiniteLattice:
    """Load a lattice from a JSON file, or build a named built-in family."""
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        return lattice_spec_from_json(json.loads(path.read_text())).build()
    return builtin(str(source))


def load_hom(path: str | Path) -> LatticeHomMap:
    path = Path(path)
    data = json.loads(path.read_text())
    src = load_lattice(_resolve(path, data["source"]))
    tgt = load_lattice(_resolve(path, data["target"]))
    return lattice_hom(src, tgt, data["map"])


def _resolve(base: Path, ref: str) -> str:
    candidate = base.parent / ref
    return str(candidate) if candidate.exists() else ref


def hom_to_json(T: LatticeHomMap, source_ref: str, target_ref: str) -> dict:
    return {"source": source_ref, "target": target_ref, "map": T.as_dict()}
