"""
Test the frl command line: exit codes, reports and determinism
"""
import json
from pathlib import Path

import pytest

import main
from models.schemas import Scenario

STATIC = Path(__file__).resolve().parent.parent / "static"


@pytest.fixture(autouse=True)
def no_timestamp(monkeypatch):
    monkeypatch.delenv("FRL_TIMESTAMP", raising=False)
    monkeypatch.setenv("FRL_THREADS", "2")


def write(tmp_path, document, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(document) if not isinstance(document, str) else document, encoding="utf-8")
    return str(path)


def run(argv, tmp_path, name="report.json"):
    out = tmp_path / name
    code = main.main(argv + ["--out", str(out)])
    report = json.loads(out.read_text(encoding="utf-8")) if out.exists() else None
    return code, report


def test_flat_kropina_scenario(tmp_path):
    code, report = run(["flatness", "--config", str(STATIC / "kropina_flat.json")], tmp_path)
    assert code == 0
    assert report["command"] == "flatness"
    assert report["summary"]["verdicts"] == {"dual": {"flat": 1}, "projective": {"flat": 1}}
    assert report["generated_at"] is None


def test_projective_flag(tmp_path):
    code, report = run(["flatness", "--projective", "--config", str(STATIC / "kropina_flat.json")], tmp_path)
    assert code == 0
    assert [c["mode"] for c in report["samples"][0]["conditions"]] == ["projective"]
    assert set(report["samples"][0]["conditions"][0]["residuals"]) == {"PF1.1", "PF1.2"}


def test_zero_beta_sample_is_a_sample_error(tmp_path):
    document = json.loads((STATIC / "kropina_flat.json").read_text(encoding="utf-8"))
    document["samples"].append({"x": [0.0, 0.0], "y": [0.0, 1.0]})
    code, report = run(["tensors", "--config", write(tmp_path, document)], tmp_path)
    assert code == 1
    assert report["samples"][1]["status"] == "error"
    assert report["samples"][1]["error_type"] == "domain"
    assert report["summary"]["errors"] == 1


def test_schema_violation_exits_two(tmp_path, capsys):
    document = {
        "n": 2,
        "metric_field": {"entries": [[1.0, 0.0], [0.0, 1.0]]},
        "one_form_field": {"entries": [0.5, 0.0, 0.0]},
        "family": {"name": "kropina"},
        "samples": [{"x": [0.0, 0.0], "y": [1.0, 0.2]}],
    }
    code, report = run(["tensors", "--config", write(tmp_path, document)], tmp_path)
    assert code == 2
    assert report is None
    assert "one_form_field" in capsys.readouterr().err


def test_unknown_family_names_the_field(tmp_path, capsys):
    document = json.loads((STATIC / "kropina_flat.json").read_text(encoding="utf-8"))
    document["family"]["name"] = "randers"
    code, _ = run(["tensors", "--config", write(tmp_path, document)], tmp_path)
    assert code == 2
    assert "family.name" in capsys.readouterr().err


def test_json_syntax_error_reports_position(tmp_path, capsys):
    path = write(tmp_path, '{"n": 2,\n  "family": }')
    code, _ = run(["tensors", "--config", path], tmp_path)
    assert code == 2
    assert f"{path}:2:" in capsys.readouterr().err


def test_missing_config(tmp_path):
    code, _ = run(["tensors", "--config", str(tmp_path / "absent.json")], tmp_path)
    assert code == 2


def test_seeded_random_runs_are_identical(tmp_path):
    argv = ["tensors", "--config", str(STATIC / "square_random.json")]
    first_code, _ = run(argv, tmp_path, "first.json")
    second_code, _ = run(argv, tmp_path, "second.json")
    assert first_code == second_code == 0
    assert (tmp_path / "first.json").read_bytes() == (tmp_path / "second.json").read_bytes()


def test_seed_override_changes_samples(tmp_path):
    config = str(STATIC / "square_random.json")
    _, base = run(["tensors", "--config", config], tmp_path, "base.json")
    _, other = run(["tensors", "--config", config, "--seed", "8"], tmp_path, "other.json")
    assert other["scenario"]["random_samples"]["seed"] == 8
    assert base["samples"][0]["y"] != other["samples"][0]["y"]


def test_tolerance_overrides_reach_the_report(tmp_path):
    argv = ["flatness", "--config", str(STATIC / "kropina_flat.json"), "--tol-cond", "1e-6", "--tol-direct", "1e-5"]
    code, report = run(argv, tmp_path)
    assert code == 0
    condition = report["samples"][0]["conditions"][0]
    assert condition["tol_cond"] == 1e-6
    assert condition["tol_direct"] == 1e-5


def test_report_scenario_round_trips(tmp_path):
    config = STATIC / "nonflat_one_form.json"
    _, report = run(["flatness", "--config", str(config)], tmp_path)
    original = Scenario.model_validate(json.loads(config.read_text(encoding="utf-8")))
    assert Scenario.model_validate(report["scenario"]) == original


def test_nonflat_scenario_is_not_flat(tmp_path):
    code, report = run(["flatness", "--config", str(STATIC / "nonflat_one_form.json")], tmp_path)
    assert code == 0
    assert report["summary"]["verdicts"] == {"dual": {"not-flat": 1}, "projective": {"not-flat": 1}}


def test_minkowski_check(tmp_path):
    code, report = run(["minkowski-check", "--config", str(STATIC / "minkowski_randers.json")], tmp_path)
    assert code == 0
    assert report["samples"] == []
    assert report["minkowski"]["holds"] is True


def test_all_command_with_minkowski(tmp_path):
    code, report = run(["all", "--config", str(STATIC / "infinite_series_all.json")], tmp_path)
    assert code in (0, 1)
    assert report["minkowski"]["shape"] == "exponential"
    assert report["samples"][0]["status"] in ("ok", "failed")
    assert report["samples"][0]["tensors"] is not None


def test_timestamp_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("FRL_TIMESTAMP", "2024-01-01T00:00:00Z")
    _, report = run(["tensors", "--config", str(STATIC / "kropina_flat.json")], tmp_path)
    assert report["generated_at"] == "2024-01-01T00:00:00Z"


def test_stdout_when_no_out(capsys):
    code = main.main(["minkowski-check", "--config", str(STATIC / "minkowski_randers.json")])
    assert code == 0
    assert json.loads(capsys.readouterr().out)["command"] == "minkowski-check"


def test_misspelled_key_is_rejected(tmp_path, capsys):
    document = json.loads((STATIC / "kropina_flat.json").read_text(encoding="utf-8"))
    document["tolerence"] = {"tol_cond": 1e-6}
    code, report = run(["tensors", "--config", write(tmp_path, document)], tmp_path)
    assert code == 2
    assert report is None
    assert "tolerence" in capsys.readouterr().err


def test_nested_unknown_key_is_rejected(tmp_path, capsys):
    document = json.loads((STATIC / "kropina_flat.json").read_text(encoding="utf-8"))
    document["family"]["exponent"] = 2.0
    code, _ = run(["tensors", "--config", write(tmp_path, document)], tmp_path)
    assert code == 2
    assert "family.exponent" in capsys.readouterr().err


def test_input_error_is_reported_once(tmp_path, capsys):
    code, _ = run(["tensors", "--config", str(tmp_path / "absent.json")], tmp_path)
    assert code == 2
    assert capsys.readouterr().err.count("cannot read scenario") == 1
