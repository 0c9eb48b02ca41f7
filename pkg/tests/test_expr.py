from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fbllab.dual import negate_point, one, sample_points
from fbllab.errors import EmptySeparatingSet, LatticeMismatch, MissingParam, ParamError, UnknownName
from fbllab.expr import (
    absolute, density_family_function, evaluate, evaluate_batch, from_json, gen, induce_operator,
    lipschitz, named_function, opposite_expr, order_density_function, phi_extract,
    positive_part, qi_truncate, quasi_interior_point, random_expr, scale, strong_unit_candidate,
    to_json, to_string, zero_expr,
)
from fbllab.lattice import (
    bottomed_powerset, chain, five_point, lattice_hom, opposite_lattice, powerset,
)
from fbllab.dual import dual_point

LATTICES = [chain(3), powerset(2), five_point(), bottomed_powerset(2)]


def _naive(f, vals):
    """Direct recursive evaluation, independent of the memoised evaluator."""
    op = f.op
    if op == "gen":
        return vals[f.elem]
    a = [_naive(g, vals) for g in f.args]
    return {"scale": lambda: f.coef * a[0], "add": lambda: a[0] + a[1], "sup": lambda: max(a),
            "inf": lambda: min(a), "abs": lambda: abs(a[0]), "pos": lambda: max(a[0], 0)}[op]()


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(LATTICES), st.integers(0, 2**31))
def test_evaluators_agree(L, seed):
    rng = np.random.default_rng(seed)
    f = random_expr(L, rng, depth=4)
    pts = sample_points(L, 10, seed=seed).points
    exact = [evaluate(f, p) for p in pts]
    assert exact == [_naive(f, p.values) for p in pts]
    batch = evaluate_batch(f, np.array([[float(v) for v in p.values] for p in pts]))
    assert np.allclose(batch, [float(v) for v in exact])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(LATTICES), st.integers(0, 2**31))
def test_positive_homogeneity_and_lipschitz(L, seed):
    rng = np.random.default_rng(seed)
    f = random_expr(L, rng, depth=3)
    x, y = sample_points(L, 2, seed=seed).points
    lam = F(1, 3)
    assert evaluate(f, x.scaled(lam)) == lam * evaluate(f, x)
    dist = max(abs(a - b) for a, b in zip(x.values, y.values))
    assert abs(evaluate(f, x) - evaluate(f, y)) <= lipschitz(f).value * dist


def test_density_family_values():
    B = bottomed_powerset(2)
    x1 = dual_point(B, {"0hat": -1, "{}": 0, "{1}": 1, "{2}": 0, "{1,2}": 1})
    assert evaluate(density_family_function(B, 1), x1) == 0
    assert evaluate(density_family_function(B, 2), x1) == -1


def test_operators_and_errors():
    L = chain(2)
    f = gen(L, 0) - gen(L, 1)
    x = dual_point(L, [F(-1, 2), 1])
    assert evaluate(f, x) == F(-3, 2)
    assert evaluate(abs(f), x) == F(3, 2)
    assert evaluate(f.pos(), x) == 0
    assert evaluate(gen(L, 0) | gen(L, 1), x) == 1
    assert evaluate(gen(L, 0) & gen(L, 1), x) == F(-1, 2)
    with pytest.raises(LatticeMismatch):
        gen(L, 0) + gen(chain(3), 0)
    with pytest.raises(LatticeMismatch):
        evaluate(f, one(chain(3)))
    assert lipschitz(zero_expr(L)).value == 0


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(LATTICES), st.integers(0, 2**31))
def test_opposite_transport_identity(L, seed):
    rng = np.random.default_rng(seed)
    f = random_expr(L, rng, depth=4)
    h = opposite_expr(f)
    assert h.lattice == opposite_lattice(L)
    for x in sample_points(L, 8, seed=seed):
        assert evaluate(h, negate_point(x)) == evaluate(f, x)


def test_induced_operator_composition():
    S, M = chain(3), powerset(2)
    T = lattice_hom(S, M, {"0": "{}", "1": "{2}", "2": "{1,2}"})
    rng = np.random.default_rng(0)
    for _ in range(10):
        f = random_expr(S, rng)
        tf = induce_operator(T, f)
        for y in sample_points(M, 5, seed=1):
            phi = phi_extract(lambda g: induce_operator(T, g), S, y)
            assert evaluate(tf, y) == evaluate(f, dual_point(S, phi))


@pytest.mark.parametrize("L", LATTICES, ids=lambda L: L.name)
def test_json_roundtrip(L):
    rng = np.random.default_rng(4)
    for _ in range(10):
        f = random_expr(L, rng, depth=4)
        g = from_json(L, to_json(f))
        assert to_string(g) == to_string(f)
    with pytest.raises(ParamError):
        from_json(L, {"op": "warp"})


def test_quasi_interior_point_and_truncation():
    L = chain(3)
    u = quasi_interior_point(L)
    assert evaluate(u, one(L)) == F(7, 8)
    with pytest.raises(EmptySeparatingSet):
        quasi_interior_point(L, separating=[])
    with pytest.raises(ParamError):
        quasi_interior_point(L, weights=[1, 1, 1])
    f = gen(L, 2) - gen(L, 0)
    x = dual_point(L, [-1, 0, 1])
    assert evaluate(qi_truncate(f, u, 1), x) == evaluate(u, x)


def test_named_functions():
    L = chain(8)
    f = named_function("order_density", L)
    assert evaluate(f, one(L)) == F(129, 256)
    assert to_string(named_function("strong_unit", powerset(2))) == \
        to_string(strong_unit_candidate(powerset(2)))
    with pytest.raises(UnknownName):
        named_function("nope", L)
    with pytest.raises(MissingParam):
        named_function("density_family", bottomed_powerset(2))
    assert evaluate(positive_part(scale(-1, absolute(gen(L, 0)))), one(L)) == 0
    assert order_density_function(L).lattice == L
