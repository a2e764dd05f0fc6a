import json
import subprocess
import sys

import pytest

from nqh import scenarios
from nqh.cli import main
from nqh.scenarios import EX_4_10, KM1_PRESENTATION, ScenarioCheck


@pytest.fixture
def presentation_file(tmp_path):
    path = tmp_path / "plane.json"
    path.write_text(json.dumps(KM1_PRESENTATION))
    return str(path)


@pytest.fixture
def double_ore_file(tmp_path):
    path = tmp_path / "classz.json"
    path.write_text(json.dumps(EX_4_10))
    return str(path)


def test_check_presentation(capsys, presentation_file):
    assert main(["check-presentation", presentation_file]) == 0
    out = capsys.readouterr().out
    assert "generators: x1, x2" in out
    assert "central element: central" in out


def test_check_presentation_noncentral(capsys, tmp_path):
    doc = dict(KM1_PRESENTATION)
    doc["central"] = {"x1 x2": "1"}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert main(["check-presentation", str(path)]) == 1
    assert "NOT central" in capsys.readouterr().out


def test_missing_file_is_exit_2(capsys):
    assert main(["clifford", "missing.json"]) == 2
    assert "error" in capsys.readouterr().err


def test_malformed_json_is_exit_2(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    assert main(["clifford", str(path)]) == 2


def test_koszul_dual_command(capsys, presentation_file):
    assert main(["koszul-dual", presentation_file]) == 0
    out = capsys.readouterr().out
    assert "generators: x1*, x2*" in out
    assert "[1, 2, 1, 0" in out


def test_clifford_command(capsys, presentation_file):
    assert main(["clifford", presentation_file, "--dump-rules"]) == 0
    out = capsys.readouterr().out
    assert "dimension: 4" in out
    assert "radical dim: 0" in out
    assert "strongly graded: yes" in out
    assert "x2*x1* -> (1)*x1*x2*" in out


def test_clifford_requires_central(capsys, tmp_path):
    doc = {k: v for k, v in KM1_PRESENTATION.items() if k != "central"}
    path = tmp_path / "nocentral.json"
    path.write_text(json.dumps(doc))
    assert main(["clifford", str(path)]) == 2


def test_double_ore_command(capsys, double_ore_file):
    assert main(["double-ore", double_ore_file]) == 0
    out = capsys.readouterr().out
    assert "case: plus" in out
    assert "extended central element: central" in out


def test_knorrer_command(capsys, double_ore_file, tmp_path):
    report_path = tmp_path / "report.txt"
    assert main(["knorrer", double_ore_file, "--report", str(report_path)]) == 0
    out = capsys.readouterr().out
    assert "isolated singularity: yes" in out
    assert report_path.read_text() == "".join(
        line + "\n" for line in out.splitlines())


def test_knorrer_json(capsys, double_ore_file):
    assert main(["--json", "knorrer", double_ore_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["isolated"] is True
    assert payload["big_radical_dim"] == 0


def test_verify_twist_command(capsys, tmp_path, clifford_km1):
    labels = clifford_km1.algebra.labels
    identity_table = [
        [{lbl: {lbl: "1"} for lbl in labels}, {}],
        [{}, {lbl: {lbl: "1"} for lbl in labels}],
    ]
    doc = {
        "algebra": KM1_PRESENTATION,
        "basis": {
            "I0_1": [["1", "0"], ["0", "1"]],
            "I0_2": [["-i", "0"], ["0", "i"]],
            "I1_1": [["0", "1"], ["1", "0"]],
            "I1_2": [["0", "i"], ["-i", "0"]],
        },
        "theta0": identity_table,
        "theta1": identity_table,
    }
    path = tmp_path / "twist.json"
    path.write_text(json.dumps(doc))
    assert main(["verify-twist", str(path)]) == 0
    out = capsys.readouterr().out
    assert "[pass] exchange-identity" in out


def test_reproduce_single(capsys):
    assert main(["reproduce", "ex-4.9-1"]) == 0
    out = capsys.readouterr().out
    assert "scenario ex-4.9-1" in out
    assert "result: PASS" in out


def test_reproduce_unknown_is_exit_2(capsys):
    assert main(["reproduce", "ex-0.0"]) == 2


def test_reproduce_reports_provenance(capsys):
    assert main(["reproduce", "prop-5.1"]) == 0
    out = capsys.readouterr().out
    assert "(source: published)" in out
    assert "(source: derived)" in out


def test_corrupted_expectation_names_scenario(capsys, monkeypatch):
    original = scenarios.REGISTRY["prop-5.1"]

    def corrupted():
        checks, lines = original()
        checks.append(ScenarioCheck("deliberately-corrupted", False, "boom",
                                    "derived"))
        return checks, lines

    monkeypatch.setitem(scenarios.REGISTRY, "prop-5.1", corrupted)
    assert main(["reproduce", "prop-5.1"]) == 1
    captured = capsys.readouterr()
    assert "FAILED scenarios: prop-5.1" in captured.err
    assert "[FAIL] deliberately-corrupted" in captured.out


def test_empty_registry_warns(capsys, monkeypatch):
    monkeypatch.setattr(scenarios, "REGISTRY", {})
    assert main(["reproduce", "all"]) == 0
    assert "warning" in capsys.readouterr().out


def test_reproduce_all_deterministic_and_parallel_safe():
    first = subprocess.run(
        [sys.executable, "-m", "nqh", "reproduce", "all"],
        capture_output=True, check=True)
    second = subprocess.run(
        [sys.executable, "-m", "nqh", "reproduce", "all", "--jobs", "2"],
        capture_output=True, check=True)
    assert first.stdout == second.stdout


def test_json_outputs_have_stable_key_order(capsys):
    assert main(["--json", "reproduce", "prop-5.1"]) == 0
    first = capsys.readouterr().out
    assert main(["--json", "reproduce", "prop-5.1"]) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    assert payload["prop-5.1"]["ok"] is True
