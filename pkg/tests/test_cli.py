"""CLI subcommands, exit codes, and end-to-end determinism."""

import json

import pytest

from prepos.cli import run_command
from prepos.serialize import save_instance

from _factories import hand_instance


@pytest.fixture
def hand_file(tmp_path):
    path = tmp_path / "hand.json"
    save_instance(hand_instance(), path)
    return path


def test_unknown_subcommand_exits_one(capsys):
    assert run_command(["frobnicate"]) == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_unknown_flag_exits_one(capsys):
    assert run_command(["validate", "x.json", "--nope"]) == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_validate_ok(hand_file, capsys):
    assert run_command(["validate", str(hand_file)]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_missing_file_exits_three(tmp_path):
    assert run_command(["validate", str(tmp_path / "absent.json")]) == 3


def test_validate_reports_violations(tmp_path, hand_file, capsys):
    doc = json.loads(hand_file.read_text())
    doc["commodities"][0]["holding_cost"] = "-1.0"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    assert run_command(["validate", str(bad)]) == 1
    assert "holding_cost" in capsys.readouterr().out


def test_generate_validate_solve_pipeline(tmp_path, capsys):
    inst = tmp_path / "case.json"
    sol = tmp_path / "solution.json"
    mps = tmp_path / "case.mps"
    assert run_command(["generate", "--seed", "5", "--out", str(inst),
                        "--stages", "2", "--branching", "2"]) == 0
    assert run_command(["validate", str(inst)]) == 0
    assert run_command(["solve", str(inst), "--out", str(sol),
                        "--mps", str(mps)]) == 0
    capsys.readouterr()
    doc = json.loads(sol.read_text())
    assert doc["status"] == "optimal"
    assert set(doc["costs"]) == {"Q", "O", "U", "V", "R", "total"}
    assert mps.read_text().startswith("NAME")


def test_generate_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run_command(["generate", "--seed", "7", "--out", str(out),
                            "--stages", "2", "--branching", "2"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_bad_config_exits_one(tmp_path):
    assert run_command(["generate", "--seed", "1", "--out",
                        str(tmp_path / "x.json"), "--stages", "1"]) == 1


def test_generate_unreadable_states_exits_three(tmp_path):
    assert run_command(["generate", "--seed", "1",
                        "--out", str(tmp_path / "x.json"),
                        "--states", str(tmp_path / "missing.csv")]) == 3


def test_solve_hand_instance_objective(hand_file, tmp_path, capsys):
    out = tmp_path / "sol.json"
    assert run_command(["solve", str(hand_file), "--out", str(out)]) == 0
    printed = capsys.readouterr().out
    assert "162.5" in printed
    doc = json.loads(out.read_text())
    assert doc["objective"] == pytest.approx(162.5, abs=1e-7)


def test_solve_twice_identical_output(hand_file, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_command(["solve", str(hand_file), "--out", str(a)]) == 0
    assert run_command(["solve", str(hand_file), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_writes_report_and_figure(hand_file, tmp_path):
    csv_path = tmp_path / "report.csv"
    fig_path = tmp_path / "figure.csv"
    code = run_command(["sweep", str(hand_file), "--param", "removal",
                        "--multipliers", "0.5,0.75,1.25,1.5,1.75,2.0",
                        "--csv", str(csv_path), "--figure-csv", str(fig_path)])
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert len(lines) == 1 + 1 + 6  # header, baseline, six multipliers
    assert fig_path.read_text().startswith("multiplier,economic_cost")


def test_sweep_bad_param_exits_one(hand_file):
    assert run_command(["sweep", str(hand_file), "--param", "acquisition",
                        "--multipliers", "1.5"]) == 1


def test_sweep_bad_multipliers_exit_one(hand_file):
    assert run_command(["sweep", str(hand_file), "--param", "holding",
                        "--multipliers", "0,1.5"]) == 1
    assert run_command(["sweep", str(hand_file), "--param", "holding",
                        "--multipliers", "abc"]) == 1
