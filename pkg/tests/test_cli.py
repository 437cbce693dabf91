import json
import subprocess
import sys
from pathlib import Path
from types import SimpleNamespace

import pytest

import gck.cli as cli
from gck.cli import COMMANDS, InputError, main, run
from gck.scenario import (
    DimensionMismatch,
    InvariantViolation,
    ScenarioSyntaxError,
    parse_scenario,
)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def scenario_text(**obj):
    return json.dumps(obj)


def invoke(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# --- parsing ------------------------------------------------------------------


def test_minimal_symplectic():
    sc = parse_scenario(scenario_text(n=2, structure={"type": "symplectic", "omega": [{"indices": [1, 2], "coeff": "1"}]}))
    assert sc.kind == "pointwise" and sc.n == 2 and sc.structure.n == 2


def test_structure_is_optional():
    assert parse_scenario(scenario_text(n=3)).structure is None


def test_nonclosed_twist():
    text = scenario_text(n=4, twist=[{"indices": [2, 3, 4], "coeff": "x1"}])
    with pytest.raises(InvariantViolation) as exc:
        parse_scenario(text)
    assert exc.value.path == "$.twist"
    assert "dx1^dx2^dx3^dx4" in str(exc.value)


def test_bad_square_reports_residual():
    text = scenario_text(n=1, structure={"type": "raw", "J": [["1", "0"], ["0", "1"]]})
    with pytest.raises(InvariantViolation) as exc:
        parse_scenario(text)
    assert exc.value.path == "$.structure"
    assert exc.value.detail == [["2/1", "0/1"], ["0/1", "2/1"]]


@pytest.mark.parametrize(
    "obj, error, path",
    [
        ({"n": 2, "structure": {"type": "complex", "j": [["0", "-1"]]}}, DimensionMismatch, "$.structure.j"),
        ({"n": 2, "structure": {"type": "kaehler"}}, ScenarioSyntaxError, "$.structure.type"),
        ({"n": "2"}, ScenarioSyntaxError, "$.n"),
        ({"n": 2, "kind": "bundle"}, ScenarioSyntaxError, "$.kind"),
        ({"n": 2, "twist": []}, DimensionMismatch, "$.twist"),
        ({"n": 2, "structure": {"type": "symplectic", "omega": [{"indices": [1, 3], "coeff": "1"}]}}, DimensionMismatch, "$.structure.omega[0].indices"),
        ({"n": 2, "structure": {"type": "symplectic", "omega": [{"indices": [1, 2], "coeff": 0.5}]}}, ScenarioSyntaxError, "$.structure.omega[0].coeff"),
        ({"n": 2, "submanifold": {"basis": [["1", "0"], ["2", "0"]]}}, InvariantViolation, "$.submanifold.basis"),
        ({"n": 2, "submanifold": {"embedding": ["x1", "0"], "dim": 1}}, ScenarioSyntaxError, "$.submanifold.embedding"),
        ({"n": 2, "kind": "field", "submanifold": {"embedding": ["x1", "0"], "dim": 1}, "sample_points": [["0", "0"]]}, DimensionMismatch, "$.sample_points[0]"),
        ({"n": 2, "structure": {"type": "symplectic", "omega_flat": [["0", "1"], ["1", "0"]]}}, InvariantViolation, "$.structure"),
    ],
)
def test_parse_errors_carry_paths(obj, error, path):
    with pytest.raises(error) as exc:
        parse_scenario(json.dumps(obj))
    assert exc.value.path == path
    assert str(exc.value).startswith(path)


def test_invalid_json():
    with pytest.raises(ScenarioSyntaxError, match="invalid JSON"):
        parse_scenario("{")


def test_max_n_cap(monkeypatch):
    monkeypatch.setenv("GCK_MAX_N", "4")
    with pytest.raises(DimensionMismatch, match="GCK_MAX_N"):
        parse_scenario(scenario_text(n=6))
    monkeypatch.setenv("GCK_MAX_N", "8")
    assert parse_scenario(scenario_text(n=8)).n == 8


# --- commands and exit codes --------------------------------------------------


def test_verdict_symplectic_plane(capsys):
    code, out = invoke(capsys, "verdict", "--scenario", str(SCENARIOS / "symplectic_r4_symplectic_plane.json"))
    payload = json.loads(out)
    assert code == 0 and payload["status"] == "pass"
    assert payload["result"]["admissible"] is True
    assert len(payload["result"]["induced"]["J_prime"]) == 4


def test_verdict_lagrangian_plane(capsys):
    code, out = invoke(capsys, "verdict", "--scenario", str(SCENARIOS / "symplectic_r4_lagrangian_plane.json"))
    payload = json.loads(out)
    assert code == 0
    admissible = next(c for c in payload["checks"] if c["name"] == "admissible")
    assert admissible["role"] == "query" and not admissible["pass"]
    assert len(admissible["witness"]) == 8


def test_axioms_twisted(capsys):
    code, out = invoke(capsys, "axioms", "--scenario", str(SCENARIOS / "axioms_twisted_r3.json"), "--seed", "3")
    payload = json.loads(out)
    assert code == 0
    assert {c["name"] for c in payload["checks"]} >= {f"axiom c{i}" for i in range(1, 8)}
    assert all(c["pass"] for c in payload["checks"])


@pytest.mark.parametrize("name", ["nonclosed_twist_r4.json", "bad_j_r1.json"])
def test_invalid_scenarios_exit_2(capsys, name):
    code, out = invoke(capsys, "validate", "--scenario", str(SCENARIOS / name))
    payload = json.loads(out)
    assert code == 2 and payload["error"] == "InvariantViolation" and payload["path"].startswith("$.")


def test_missing_file_exit_2(capsys, tmp_path):
    code, out = invoke(capsys, "validate", "--scenario", str(tmp_path / "absent.json"))
    assert code == 2 and json.loads(out)["error"] == "InputError"


def test_command_needs_data_exit_2(capsys):
    code, out = invoke(capsys, "kahler", "--scenario", str(SCENARIOS / "complex_c2_line.json"))
    assert code == 2 and "second" in json.loads(out)["message"]


def test_failed_assert_exit_1(capsys, monkeypatch):
    # simulate a library defect: the square identities stop holding
    monkeypatch.setattr(cli, "square_identities", lambda s: SimpleNamespace(all_hold=False))
    code, out = invoke(capsys, "validate", "--scenario", str(SCENARIOS / "kahler_r4.json"))
    payload = json.loads(out)
    assert code == 1 and payload["status"] == "fail"


def test_run_rejects_unknown_command():
    sc = parse_scenario(scenario_text(n=2))
    with pytest.raises(InputError):
        run("frobnicate", sc)


@pytest.mark.parametrize("path", sorted(SCENARIOS.glob("*.json")), ids=lambda p: p.stem)
def test_every_scenario_every_command(capsys, path):
    codes = {}
    for command in COMMANDS:
        first = invoke(capsys, command, "--scenario", str(path), "--seed", "11")
        second = invoke(capsys, command, "--scenario", str(path), "--seed", "11")
        assert first == second, f"{command} is not deterministic"
        codes[command] = first[0]
        assert first[0] in (0, 2)
    invalid = path.stem in ("nonclosed_twist_r4", "bad_j_r1")
    no_structure = path.stem == "axioms_twisted_r3"
    assert codes["validate"] == (2 if invalid or no_structure else 0)


def test_text_output_and_timing(capsys):
    path = str(SCENARIOS / "kahler_r4.json")
    code, out = invoke(capsys, "kahler", "--scenario", path, "--text")
    assert code == 0 and out.startswith("kahler: PASS")
    assert "timing_ms" not in out
    code, out = invoke(capsys, "kahler", "--scenario", path, "--timing")
    assert "timing_ms" in json.loads(out)


def test_seed_range(capsys):
    code, _ = invoke(capsys, "validate", "--scenario", str(SCENARIOS / "kahler_r4.json"), "--seed", "-1")
    assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gck.cli", "validate", "--scenario", str(SCENARIOS / "poisson_r2.json")],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "pass"
