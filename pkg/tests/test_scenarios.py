import json

import pytest

from fbllab.errors import UnknownScenario
from fbllab.scenarios import SCENARIOS, default_config, run_all, run_scenario


@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_every_scenario_passes_with_defaults(name):
    rep = run_scenario(name, seed=0)
    assert rep.passed, [c.to_json() for c in rep.checks if not c.passed] or rep.error
    assert rep.checks
    out = rep.to_json()
    json.dumps(out)
    assert out["passed"] == all(c["passed"] for c in out["checks"])


def test_separation_on_chain4_has_six_pairs():
    rep = run_scenario("separation", {"lattice": "chain(4)"})
    assert len(rep.witnesses["pairs"]) == 6 and rep.passed


def test_strong_unit_reports_unit():
    rep = run_scenario("strong-unit", {"lattice": "powerset(2)"})
    assert rep.witnesses["unit"] == "(|δ[{}]| ∨ |δ[{1,2}]|)"


def test_errors_are_recorded_not_raised():
    rep = run_scenario("separation", {"lattice": "nonsense"})
    assert not rep.passed and "ParamError" in rep.error
    with pytest.raises(UnknownScenario):
        run_scenario("nope")


def test_run_all_edge_cases():
    empty = run_all({"scenarios": []})
    assert empty.passed and empty.reports == []
    mixed = run_all({"scenarios": [{"scenario": "nope"}, {"scenario": "density-family"}]})
    assert len(mixed.reports) == 1 and mixed.reports[0].passed
    assert not mixed.passed and mixed.errors[0]["scenario"] == "nope"


def test_suite_is_deterministic_and_parallel_agrees():
    a = run_all(default_config()).to_json(include_timing=False)
    b = run_all(default_config(), jobs=2).to_json(include_timing=False)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["passed"]


def test_seed_changes_samples():
    a = run_scenario("connectivity", {"samples": 5, "steps": 5, "zero_samples": 2}, seed=1)
    b = run_scenario("connectivity", {"samples": 5, "steps": 5, "zero_samples": 2}, seed=2)
    assert a.passed and b.passed
