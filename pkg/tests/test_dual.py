from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fbllab.dual import (
    affine_path_check, cell_grid_points, constant, convex_combination, dual_point,
    enumerate_cells, integer_rows, locate, membership, membership_batch, negate_point,
    nonconstant_hom, one, point_from_cell, prime_filter, pullback_hom, sample_points,
    sample_zero_set, separation_witness, sign_vertex_points, zero,
)
from fbllab.errors import (
    CoordinateOrderViolation, LatticeMismatch, NotADualPoint, NotIrreducible, OrderViolation,
    RangeViolation, TrivialLattice,
)
from fbllab.lattice import (
    bottomed_powerset, chain, five_point, lattice_hom, opposite_lattice, powerset,
)

from oracles import all_homs_on_grid

LATTICES = [chain(2), chain(4), powerset(2), powerset(3), five_point(), bottomed_powerset(2)]


def test_powerset2_cells_and_vertex_point():
    L = powerset(2)
    cells = enumerate_cells(L)
    assert [c.chain_labels for c in cells] == [("{1}",), ("{2}",)]
    p = point_from_cell(cells[0], [-1, 1])
    assert p.values == (-1, 1, -1, 1)


def test_chain_cell_is_single_simplex():
    cells = enumerate_cells(chain(4))
    assert len(cells) == 1 and cells[0].dim == 4
    assert cells[0].levels == (0, 1, 2, 3)


@pytest.mark.parametrize("L", LATTICES, ids=lambda L: L.name)
def test_cells_cover_grid_homs_and_are_homs(L):
    homs = {p.values for p in all_homs_on_grid(L)}
    grid = {p.values for p in cell_grid_points(L, [F(i, 2) for i in range(-2, 3)])}
    assert homs == grid


def test_point_validation():
    L = chain(2)
    assert dual_point(L, {"0": "-1/2", "1": 1}).values == (F(-1, 2), 1)
    with pytest.raises(RangeViolation):
        dual_point(L, [0, 2])
    with pytest.raises(NotADualPoint):
        dual_point(powerset(2), [0, 1, 1, 0])
    cell = enumerate_cells(L)[0]
    with pytest.raises(CoordinateOrderViolation):
        point_from_cell(cell, [1, 0])
    with pytest.raises(RangeViolation):
        point_from_cell(cell, [0, 3])


def test_special_points():
    L = five_point()
    assert membership(L, one(L).values) and membership(L, zero(L).values)
    assert membership(L, constant(L, F(-1, 3)).values)
    with pytest.raises(NotIrreducible):
        prime_filter(L, "1")
    w = separation_witness(L, "b", "c")
    assert w["b"] == 0 and w["c"] == 1 and membership(L, w.values)
    with pytest.raises(OrderViolation):
        separation_witness(L, "b", "a")
    assert not nonconstant_hom(L).is_constant()
    with pytest.raises(TrivialLattice):
        nonconstant_hom(chain(1))


def test_locate_roundtrip():
    L = powerset(3)
    for p in sample_points(L, 50, seed=1):
        found = locate(p)
        assert found
        for cell, coords in found:
            assert point_from_cell(cell, coords) == p


@pytest.mark.parametrize("L", LATTICES, ids=lambda L: L.name)
def test_negation_lands_in_opposite_dual(L):
    Lop = opposite_lattice(L)
    for p in sample_points(L, 30, seed=2):
        q = negate_point(p)
        assert q.lattice == Lop and membership(Lop, q.values)


def test_pullback_is_a_hom():
    T = lattice_hom(chain(3), powerset(2), {"0": "{}", "1": "{1}", "2": "{1,2}"})
    for y in sample_points(powerset(2), 30, seed=3):
        assert membership(chain(3), pullback_hom(T, y).values)
    with pytest.raises(LatticeMismatch):
        pullback_hom(T, one(chain(3)))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(LATTICES), st.integers(0, 2**31))
def test_sampled_points_pass_both_membership_checks(L, seed):
    pts = sample_points(L, 5, seed=seed).points
    d = 2**12
    assert all(membership(L, p.values) for p in pts)
    assert membership_batch(L, integer_rows(pts, d), d).all()


def test_membership_batch_rejects_non_homs():
    L = powerset(2)
    rows = np.array([[0, 4, 4, 0], [0, 4, 0, 4], [-4, 0, 0, 4], [0, 8, 0, 8]])
    assert membership_batch(L, rows, 4).tolist() == [False, True, False, False]


def test_paths_and_zero_sets():
    L = five_point()
    x = sample_points(L, 1, seed=5).points[0]
    assert affine_path_check(x, one(L), 50).ok
    rep = affine_path_check(one(L), constant(L, -1), 10)
    assert not rep.ok and rep.first_failure["reason"] == "zero function"
    for z in sample_zero_set(L, "b", 20, seed=1):
        assert z["b"] == 0 and membership(L, z.values)


def test_sign_vertices_include_constants():
    L = chain(3)
    vals = {p.values for p in sign_vertex_points(L)}
    assert (1, 1, 1) in vals and (-1, -1, -1) in vals and (0, 0, 0) not in vals
    assert all(membership(L, v) for v in vals)


def test_convex_combination_of_homs_with_constant():
    L = powerset(2)
    x = sample_points(L, 1, seed=9).points[0]
    z = convex_combination(x, one(L), F(1, 3))
    assert membership(L, z.values)
