import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from fbllab.errors import CyclicOrder, NotAHomomorphism, NotALattice, NotDistributive, ParamError
from fbllab.lattice import (
    are_isomorphic, bottomed_powerset, build_lattice, builtin, chain, diamond, five_point,
    identity_hom, inclusion_hom, interval, interval_retraction, is_injective, is_surjective,
    join_all, join_irreducible_decomposition, lattice_hom, lattice_spec_from_json, lattice_to_json,
    load_hom, load_lattice, opposite_lattice, pentagon, powerset, product, square, sublattice,
)

FAMILIES = [chain(1), chain(2), chain(5), powerset(0), powerset(2), powerset(3), five_point(),
            bottomed_powerset(2), square(), product(chain(2), chain(3))]


@pytest.mark.parametrize("L", FAMILIES, ids=lambda L: L.name)
def test_meet_join_laws_by_brute_force(L):
    n = len(L)
    for x, y in itertools.product(range(n), repeat=2):
        m, j = L.meet[x][y], L.join[x][y]
        lower = [z for z in range(n) if L.leq[z][x] and L.leq[z][y]]
        upper = [z for z in range(n) if L.leq[x][z] and L.leq[y][z]]
        assert m in lower and all(L.leq[z][m] for z in lower)
        assert j in upper and all(L.leq[j][z] for z in upper)
    for x, y, z in itertools.product(range(n), repeat=3):
        assert L.meet[x][L.join[y][z]] == L.join[L.meet[x][y]][L.meet[x][z]]


@pytest.mark.parametrize("L", FAMILIES, ids=lambda L: L.name)
def test_irreducibles_have_one_lower_cover_and_generate(L):
    for p in L.irreducibles:
        assert p != L.bottom
        assert len(L.lower_covers[p]) == 1
    for z in range(len(L)):
        parts = join_irreducible_decomposition(L, z)
        assert join_all(L, parts) == L.elements[z]


def test_irreducible_counts():
    assert [len(chain(n).irreducibles) for n in (1, 2, 5)] == [0, 1, 4]
    assert sorted(powerset(3).irreducible_labels) == ["{1}", "{2}", "{3}"]
    assert sorted(five_point().irreducible_labels) == ["a", "b", "c"]
    assert sorted(bottomed_powerset(2).irreducible_labels) == ["{1}", "{2}", "{}"]


def test_rejects_non_distributive_and_bad_orders():
    with pytest.raises(NotDistributive) as ex:
        diamond().build()
    assert len(ex.value.witness) == 3
    with pytest.raises(NotDistributive):
        pentagon().build()
    with pytest.raises(CyclicOrder):
        build_lattice(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(NotALattice):
        build_lattice(["a", "b"], [])


def test_opposite_and_isomorphism():
    L = five_point()
    Lop = opposite_lattice(L)
    assert not are_isomorphic(L, Lop)
    assert opposite_lattice(Lop) == L
    assert are_isomorphic(chain(4), opposite_lattice(chain(4)))
    assert are_isomorphic(powerset(2), square())


def test_homomorphisms():
    L, M = chain(3), powerset(2)
    T = lattice_hom(L, M, {"0": "{}", "1": "{1}", "2": "{1,2}"})
    assert T("1") == "{1}" and is_injective(T) and not is_surjective(T)
    with pytest.raises(NotAHomomorphism):
        lattice_hom(L, M, {"0": "{1}", "1": "{2}", "2": "{1,2}"})
    assert identity_hom(M).compose(T) == T
    sub = sublattice(square(), ["0", "a", "1"])
    assert is_injective(inclusion_hom(sub, square()))


def test_interval_retraction_fixes_interval():
    L = powerset(3)
    inc, ret = interval_retraction(L, "{1}", "{1,2,3}")
    assert len(interval(L, "{1}", "{1,2,3}").lattice) == 4
    for x in inc.source.elements:
        assert ret(inc(x)) == x


def test_builtins_and_json_roundtrip(tmp_path):
    assert builtin("chain(4)") == chain(4)
    assert builtin("powerset:2") == powerset(2)
    with pytest.raises(ParamError):
        builtin("nonsense")
    L = five_point()
    path = tmp_path / "l.json"
    path.write_text(json.dumps(lattice_to_json(L)))
    assert load_lattice(path) == L
    assert lattice_spec_from_json(lattice_to_json(L)).build() == L
    hom = {"source": "chain(3)", "target": "powerset(2)", "map": {"0": "{}", "1": "{2}", "2": "{1,2}"}}
    hp = tmp_path / "h.json"
    hp.write_text(json.dumps(hom))
    assert load_hom(hp)("1") == "{2}"


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3))
def test_product_of_chains_is_distributive_lattice(a, b):
    P = product(chain(a), chain(b))
    assert len(P) == a * b
    # irreducibles of a product of chains: (a-1) + (b-1)
    assert len(P.irreducibles) == (a - 1) + (b - 1)
