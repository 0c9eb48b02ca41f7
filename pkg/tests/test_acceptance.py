"""Acceptance gate: one test, and one PASS/FAIL line, per criterion.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline; the
same lines are repeated in the terminal summary.
"""

import itertools
import json
import time
from fractions import Fraction as F

import numpy as np
import pytest

from fbllab import dual as D
from fbllab import expr as E
from fbllab import lattice as LT
from fbllab import norms as N
from fbllab.scenarios import TEST_LATTICES, default_config, run_all, run_scenario

from oracles import all_homs_on_grid

LATTICES = [LT.load_lattice(d) for d in TEST_LATTICES]


def test_criterion_01_dual_covering(record):
    t0 = time.perf_counter()
    missing, total = 0, 0
    for L in LATTICES:
        for p in all_homs_on_grid(L):
            total += 1
            if not D.locate(p):
                missing += 1
    dt = time.perf_counter() - t0
    ok = missing == 0 and dt < 30
    record(1, ok, f"{total} grid homomorphisms, {missing} outside every cell, {dt:.1f}s")
    assert ok


def test_criterion_02_separation(record):
    bad, pairs = [], 0
    for L in LATTICES:
        for x, y in itertools.permutations(range(len(L)), 2):
            if L.leq[y][x]:
                continue
            pairs += 1
            w = D.separation_witness(L, x, y)
            f = E.gen(L, x) - E.gen(L, y)
            est = N.free_norm_lower(f, 1, witnesses=[(w,)], vertex_cap=0, starts=0, use_sup_norm=False)
            if not (est.lower >= 1 and est.verify(f)):
                bad.append((L.name, x, y))
    ok = not bad
    record(2, ok, f"{pairs} ordered pairs, {len(bad)} with lower bound < 1")
    assert ok


def test_criterion_03_generator_norm(record):
    bad, count = [], 0
    for L in LATTICES:
        for x in range(len(L)):
            count += 1
            f = E.gen(L, x)
            lower = N.free_norm_lower(f, 1, witnesses=[(D.one(L),)], vertex_cap=0, starts=0,
                                      use_sup_norm=False).lower
            upper = N.domination_upper(f, [(1, x)])
            if not (lower == 1 == upper):
                bad.append((L.name, x, lower, upper))
    ok = not bad
    record(3, ok, f"‖δ_x‖ = 1 exactly for {count - len(bad)}/{count} generators")
    assert ok


def test_criterion_04_strong_unit(record):
    fails = [L.name for L in LATTICES if not N.strong_unit_check(L).has_strong_unit]
    rep = run_scenario("strong-unit-obstruction", {"N": 8, "n": 3, "corpus_size": 100}, seed=0)
    z = rep.witnesses["z"]
    ok = not fails and rep.passed
    record(4, ok, f"unit certified on {len(LATTICES) - len(fails)}/{len(LATTICES)} lattices; "
                  f"obstruction z* = {[str(v) for v in z.values]} {'PASS' if rep.passed else 'FAIL'}")
    assert ok


def test_criterion_05_density_family(record):
    B = LT.bottomed_powerset(2)
    rep = run_scenario("density-family", {"gamma_size": 2})
    f1, f2 = E.density_family_function(B, 1), E.density_family_function(B, 2)
    x1 = D.dual_point(B, {"0hat": -1, "{}": 0, "{1}": 1, "{2}": 0, "{1,2}": 1})
    x2 = D.dual_point(B, {"0hat": -1, "{}": 0, "{1}": 0, "{2}": 1, "{1,2}": 1})
    direct = (E.evaluate(f1, x1), E.evaluate(f2, x1), E.evaluate(f2, x2), E.evaluate(f1, x2))
    lower = N.free_norm_lower(f1 - f2, 1, witnesses=[(x1,)], vertex_cap=0, starts=0,
                              use_sup_norm=False).lower
    ok = rep.passed and direct == (0, -1, 0, -1) and lower >= 1
    record(5, ok, f"f_γ(x*_γ), f_γ'(x*_γ) = {[str(v) for v in direct]}, ‖f_1 − f_2‖ ≥ {lower}")
    assert ok


def test_criterion_06_separable_interval(record):
    rep = run_scenario("separable-interval", {"gamma_size": 3, "gamma0": 1, "samples": 10_000})
    ok = rep.passed
    record(6, ok, f"10^4 points, collapse failures = {rep.checks[0].observed}")
    assert ok


def test_criterion_07_quasi_interior(record):
    t0 = time.perf_counter()
    reps = [run_scenario("quasi-interior", {"lattice": l, "corpus_size": 20, "eps": "1/1000"})
            for l in ("chain(4)", "powerset(2)")]
    dt = time.perf_counter() - t0
    worst = max(F(r.checks[-1].observed) for r in reps)
    ok = all(r.passed for r in reps) and worst <= F(1, 1000) and dt < 120
    record(7, ok, f"20 expressions each on chain(4), powerset(2); max certified ‖f_m − f‖_∞ = {worst}, "
                  f"{dt:.1f}s")
    assert ok


def test_criterion_08_induced_operators(record):
    rep = run_scenario("induced-hom", {"samples": 1000, "corpus_size": 20, "tuples": 1000}, seed=0)
    # a second homomorphism: the interval retraction of powerset(3) onto [{1}, {1,2,3}]
    _, ret = LT.interval_retraction(LT.powerset(3), "{1}", "{1,2,3}")
    rep2 = run_scenario("induced-hom", {"hom": ret, "samples": 1000, "corpus_size": 20, "tuples": 1000},
                        seed=1)
    ok = rep.passed and rep2.passed
    failed = [c.description for r in (rep, rep2) for c in r.checks if not c.passed]
    record(8, ok, f"{len(rep.checks) + len(rep2.checks)} checks over two homomorphisms, failed: {failed}")
    assert ok


def test_criterion_09_opposite_isometry(record):
    reps = [run_scenario("opposite-isometry", {"lattice": d, "corpus_size": 6}) for d in TEST_LATTICES]
    bad = [r.lattice for r in reps if not r.passed]
    ok = not bad
    record(9, ok, f"negation and witness transport exact on {len(reps) - len(bad)}/{len(reps)} lattices")
    assert ok


def test_criterion_10_connectivity(record):
    bad = []
    for d in TEST_LATTICES:
        r = run_scenario("connectivity", {"lattice": d, "samples": 1000, "steps": 1000,
                                          "zero_samples": 100})
        if not r.passed:
            bad.append(d)
    ok = not bad
    record(10, ok, f"10^3 points × 10^3 steps and 10^2 zero-set points per element on "
                   f"{len(TEST_LATTICES)} lattices, failing: {bad}")
    assert ok


def test_criterion_11_order_density_demo(record):
    d = N.order_density_demo(8)
    rows = [r for r in d.rows if "t" in r]
    below = [r for r in rows if F(r["t"]) < F(r["threshold"])]
    zero_below = all(F(r["f_z"]) == 0 for r in below)
    homog = all(F(r["h_z"]) == F(r["t_h_x"]) > 0 for r in rows)
    ok = d.passed and zero_below and homog and bool(below)
    record(11, ok, f"t̄ = {d.threshold}, f(𝟙) = {d.f_at_one}, {len(below)} grid rows below t̄ with f(z_t) = 0")
    assert ok


def test_criterion_12_determinism(record):
    a = json.dumps(run_all(default_config(), seed=7).to_json(include_timing=False), sort_keys=True)
    b = json.dumps(run_all(default_config(), seed=7).to_json(include_timing=False), sort_keys=True)
    ok = a == b
    record(12, ok, f"two seeded suite runs, {len(a)} bytes each, identical = {ok}")
    assert ok
