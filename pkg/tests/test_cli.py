import json

import numpy as np
import pytest

from marketopt.cli import main
from marketopt.config import (
    ConfigError,
    config_from_scenario,
    config_to_dict,
    load_config,
)
from marketopt.scenarios import preset_scenario
from marketopt.solver import SweepSettings, solve


def _run(*argv):
    return main(list(argv))


def test_solve_writes_trajectory_and_summary(tmp_path):
    out = tmp_path / "run"
    code = _run("solve", "--preset", "scenario1", "--out", str(out))
    assert code == 0
    lines = (out / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,R,C,P,u1,u2,p1,p2,p3,phi1,phi2"
    assert len(lines) == 1 + 1401  # header plus one row per node (n = 1400)
    summary = json.loads((out / "summary.json").read_text())
    assert summary["converged"] is True
    assert summary["settings"]["grid_n"] == 1400
    assert summary["settings"]["objective"] == "l2"
    assert (out / "config.json").exists()


def test_solve_reruns_are_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert _run("solve", "--preset", "scenario2", "--n", "400",
                "--out", str(out1)) == 0
    assert _run("solve", "--preset", "scenario2", "--n", "400",
                "--out", str(out2)) == 0
    assert (out1 / "trajectory.csv").read_bytes() == (out2 / "trajectory.csv").read_bytes()
    assert (out1 / "summary.json").read_bytes() == (out2 / "summary.json").read_bytes()


def test_config_round_trip_reproduces_artifacts(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert _run("solve", "--preset", "scenario3", "--n", "400",
                "--out", str(out1)) == 0
    assert _run("solve", "--config", str(out1 / "config.json"),
                "--out", str(out2)) == 0
    assert (out1 / "trajectory.csv").read_bytes() == (out2 / "trajectory.csv").read_bytes()
    assert (out1 / "summary.json").read_bytes() == (out2 / "summary.json").read_bytes()


def test_csv_numbers_reparse_to_exact_doubles(tmp_path):
    out = tmp_path / "run"
    assert _run("solve", "--preset", "scenario1", "--n", "400", "--out", str(out)) == 0
    scenario = preset_scenario("scenario1")
    result = solve(
        scenario,
        SweepSettings(grid=config_from_scenario(scenario, grid_n=400).grid),
    )
    rows = (out / "trajectory.csv").read_text().splitlines()[1:]
    parsed = np.array([[float(v) for v in row.split(",")] for row in rows])
    assert np.array_equal(parsed[:, 1:4], result.state.values)
    assert np.array_equal(parsed[:, 4:6], result.controls.values)
    assert np.array_equal(parsed[:, 6:9], result.costate.values)


def test_l1_solve_populates_switching_columns(tmp_path):
    out = tmp_path / "run"
    assert _run("solve", "--preset", "scenario3-l1", "--n", "700",
                "--out", str(out)) == 0
    rows = (out / "trajectory.csv").read_text().splitlines()
    last = [float(v) for v in rows[-1].split(",")]
    u1, u2, phi1, phi2 = last[4], last[5], last[9], last[10]
    assert (u1, u2) == (0.0, 0.0)
    assert phi1 == pytest.approx(1.5)  # terminal switching values are the
    assert phi2 == pytest.approx(0.01)  # control weights
    assert any(float(r.split(",")[9]) < 0 for r in rows[1:])


def test_objective_flag_overrides_scenario(tmp_path):
    out = tmp_path / "run"
    assert _run("solve", "--preset", "scenario3", "--objective", "l1",
                "--n", "700", "--out", str(out)) == 0
    cfg = json.loads((out / "config.json").read_text())
    assert cfg["scenario"]["objective"] == "l1"


def test_json_trajectory_format(tmp_path):
    out = tmp_path / "run"
    assert _run("solve", "--preset", "scenario1", "--n", "400",
                "--format", "json", "--out", str(out)) == 0
    doc = json.loads((out / "trajectory.json").read_text())
    assert doc["columns"][0] == "t"
    assert len(doc["rows"]) == 401
    assert not (out / "trajectory.csv").exists()


def test_exit_code_two_on_non_convergence(tmp_path):
    out = tmp_path / "run"
    code = _run("solve", "--preset", "scenario1", "--n", "400",
                "--max-iters", "1", "--out", str(out))
    assert code == 2
    assert (out / "trajectory.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["converged"] is False


def test_invalid_preset_lists_choices(tmp_path, capsys):
    code = _run("solve", "--preset", "nope", "--out", str(tmp_path / "x"))
    assert code == 1
    err = capsys.readouterr().err
    assert "scenario1" in err and "comparison-default" in err


def test_missing_scenario_source_fails(tmp_path):
    assert _run("solve", "--out", str(tmp_path / "x")) == 1


def test_bad_flag_values_are_input_errors(tmp_path, capsys):
    code = _run("sweep", "--preset", "comparison-default", "--param", "alpha",
                "--out", str(tmp_path / "x"))
    assert code == 1
    assert "--param" in capsys.readouterr().err
    assert _run("--help") == 0


def test_unusable_grid_size_is_an_input_error(tmp_path, capsys):
    code = _run("solve", "--preset", "scenario1", "--n", "1",
                "--out", str(tmp_path / "x"))
    assert code == 1
    assert "intervals" in capsys.readouterr().err


def test_preset_and_config_together_fail(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(config_to_dict(
        config_from_scenario(preset_scenario("scenario1")))))
    code = _run("solve", "--preset", "scenario1", "--config", str(cfg),
                "--out", str(tmp_path / "x"))
    assert code == 1
    assert "not both" in capsys.readouterr().err


def test_config_error_names_the_field(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    doc = config_to_dict(config_from_scenario(preset_scenario("scenario1")))
    del doc["scenario"]["weights"]["kappa2"]
    bad.write_text(json.dumps(doc))
    code = _run("solve", "--config", str(bad), "--out", str(tmp_path / "x"))
    assert code == 1
    assert "scenario.weights.kappa2" in capsys.readouterr().err


def test_load_config_rejects_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="not valid JSON"):
        load_config(path)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config(tmp_path / "missing.json")


def test_compare_emits_four_rows_with_optimal_minimal(tmp_path):
    out = tmp_path / "cmp"
    code = _run("compare", "--preset", "comparison-default", "--n", "700",
                "--out", str(out))
    assert code == 0
    lines = (out / "table.csv").read_text().splitlines()
    assert lines[0] == "param_value,strategy,cost,converged,iterations"
    assert len(lines) == 5
    costs = {}
    for line in lines[1:]:
        fields = line.split(",")
        assert fields[0] == ""  # single-point table has no swept value
        costs[fields[1]] = float(fields[2])
        assert fields[3] == "true"
    assert costs["optimal"] == min(costs.values())
    mirror = json.loads((out / "table.json").read_text())
    assert len(mirror["rows"]) == 4
    assert {r["strategy"] for r in mirror["rows"]} == set(costs)


def test_sweep_command_uses_config_values(tmp_path):
    cfg_path = tmp_path / "sweep.json"
    doc = config_to_dict(config_from_scenario(preset_scenario("comparison-default"),
                                              grid_n=700))
    doc["sweep"] = {
        "param": "gamma",
        "values": [0.5, 1.1],
        "strategies": ["no-control", "optimal"],
    }
    cfg_path.write_text(json.dumps(doc))
    out = tmp_path / "swp"
    code = _run("sweep", "--config", str(cfg_path), "--out", str(out))
    assert code == 0
    lines = (out / "table.csv").read_text().splitlines()
    assert len(lines) == 1 + 2 * 2  # one row per (value, strategy) pair
    first = lines[1].split(",")
    assert float(first[0]) == 0.5
    assert first[1] == "no-control"


def test_sweep_without_param_fails(tmp_path, capsys):
    code = _run("sweep", "--preset", "comparison-default",
                "--out", str(tmp_path / "x"))
    assert code == 1
    assert "--param" in capsys.readouterr().err
