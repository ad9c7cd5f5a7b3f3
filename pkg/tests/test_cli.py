import csv
import json
import subprocess
import sys

import pytest

from barelyrandom.cli import main


def _gen(tmp_path, name, *args):
    path = tmp_path / name
    assert main(["gen", *args, "--out", str(path)]) == 0
    return str(path)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_simulate_fig1a(tmp_path, capsys):
    path = _gen(tmp_path, "fig1a.jsonl", "--example", "fig1a")
    assert main(["simulate", path, "--policy", "ran-j"]) == 0
    out = _json(capsys)
    assert out["ratio"] == "301/101" and out["opt"] == "301/100"


def test_simulate_single_interval(tmp_path, capsys):
    path = _gen(tmp_path, "one.jsonl", "--example", "single_interval")
    assert main(["simulate", path, "--policy", "ran"]) == 0
    assert _json(capsys)["ratio"] == "2/1"


def test_class_mismatch_exit(tmp_path, capsys):
    path = _gen(tmp_path, "mono.jsonl", "--class", "Monotone", "--n", "5")
    assert main(["simulate", path, "--policy", "ran-c"]) == 3


def test_bad_file_exit(tmp_path):
    path = tmp_path / "broken.jsonl"
    path.write_text("{not json\n")
    assert main(["opt", str(path)]) == 2
    assert main(["opt", str(tmp_path / "missing.jsonl")]) == 2


def test_opt(tmp_path, capsys):
    path = _gen(tmp_path, "fig1a.jsonl", "--example", "fig1a", "--eps", "1/10")
    assert main(["opt", path]) == 0
    out = _json(capsys)
    assert out["opt"] == "31/10" and set(out["schedule"]) == {"X", "Y", "Z"}


def test_adversary_default(capsys, tmp_path):
    inst = tmp_path / "released.jsonl"
    assert main(["adversary", "--out", str(inst)]) == 0
    out = _json(capsys)
    assert out["ratio"] == "2/1" and out["terminal_case"] == "Continue2Sets"
    assert inst.read_text().startswith("{")


def test_adversary_bad_delta():
    assert main(["adversary", "--delta", "2"]) == 2
    with pytest.raises(SystemExit):
        main(["adversary", "--delta", "0.5"])


def test_adversary_release_cap(monkeypatch):
    monkeypatch.setenv("SCHED_STEP_CAP", "100")
    assert main(["adversary"]) == 4


def test_adversary_zoo_pair(capsys):
    assert main(["adversary", "--policy", "greedy-keepfirst"]) == 0
    assert float(_json(capsys)["ratio_decimal"]) >= 1.5


def test_sweep_csv(tmp_path):
    path = tmp_path / "sweep.csv"
    assert main(["sweep", "--class", "EqualLengthIntervals", "--policy", "ran",
                 "--n", "8", "--count", "6", "--csv", str(path)]) == 0
    rows = list(csv.DictReader(open(path)))
    # one row per instance plus the worst-case summary
    assert len(rows) == 7 and rows[-1]["seed"] == "max"
    assert max(float(r["ratio_decimal"]) for r in rows[:-1]) == float(rows[-1]["ratio_decimal"])


def test_verify_quick_suite(capsys):
    assert main(["verify", "--suite", "lemma", "--quick"]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_verify_fault_is_caught(capsys):
    assert main(["verify", "--suite", "oracles", "--quick", "--inject-fault"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_verify_charging_example(capsys):
    assert main(["verify", "--charging"]) == 0
    out = _json(capsys)
    assert out["ok"] and out["bad"] == {"5": ["X", "Y"]} and out["pairing"] == {"5": 4}


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "barelyrandom", "--help"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "simulate" in res.stdout
