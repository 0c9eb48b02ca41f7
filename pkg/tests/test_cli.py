import json
import subprocess
import sys

from fbllab.cli import main

GEN1 = '{"op": "gen", "elem": "1"}'
DIFF = '{"op": "add", "args": [{"op": "gen", "elem": "0"}, {"op": "scale", "coef": "-1", "arg": {"op": "gen", "elem": "1"}}]}'


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_sup_norm_command(capsys):
    assert main(["sup-norm", "--lattice", "chain(2)", "--expr", DIFF, "--output", "json"]) == 0
    out = _json(capsys)
    assert out["value_low"] == out["value_high"] == "2"


def test_free_norm_command(capsys):
    rc = main(["free-norm", "--lattice", "chain(2)", "--expr", GEN1, "--m", "2", "--starts", "2",
               "--iterations", "5", "--output", "json"])
    out = _json(capsys)
    assert rc == 0 and out["lower"] == "1" and out["upper"] == "1"
    assert set(out) >= {"lower", "upper", "witness", "constraint", "objective", "meta"}


def test_eval_and_cells(capsys, tmp_path):
    pt = tmp_path / "p.json"
    pt.write_text(json.dumps({"values": {"0": "-1", "1": "1/3"}}))
    assert main(["eval", "--lattice", "chain(2)", "--expr", GEN1, "--point", str(pt), "--output", "json"]) == 0
    assert _json(capsys)["value"] == "1/3"
    assert main(["dual-cells", "--lattice", "powerset(2)", "--output", "json"]) == 0
    assert len(_json(capsys)["cells"]) == 2


def test_scenario_text_and_exit_codes(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("FBLLAB_OUTPUT_DIR", str(tmp_path))
    assert main(["scenario", "density-family"]) == 0
    text = capsys.readouterr().out
    assert "PASS" in text and "f_1(x*_1)" in text
    assert (tmp_path / "scenario-density-family.json").exists()
    assert main(["scenario", "separation", "--lattice", "bogus"]) == 1
    capsys.readouterr()
    assert main(["eval", "--lattice", "chain(2)", "--expr", GEN1, "--point", '{"values": {"0": 2, "1": 2}}']) == 2


def test_hom_file_and_run_all_config(capsys, tmp_path):
    hom = tmp_path / "h.json"
    hom.write_text(json.dumps({"source": "chain(2)", "target": "chain(3)", "map": {"0": "0", "1": "2"}}))
    assert main(["scenario", "induced-hom", "--hom", str(hom), "--params",
                 '{"samples": 20, "corpus_size": 3, "tuples": 20}', "--output", "json"]) == 0
    assert _json(capsys)["passed"]
    cfg = tmp_path / "suite.json"
    cfg.write_text(json.dumps({"seed": 1, "scenarios": [{"scenario": "order-density-demo"}]}))
    assert main(["run-all", "--config", str(cfg), "--output", "json"]) == 0
    assert _json(capsys)["passed"]


def test_console_entry_point_runs():
    r = subprocess.run([sys.executable, "-m", "fbllab.cli", "dual-cells", "--lattice", "chain(3)"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "cell" in r.stdout
