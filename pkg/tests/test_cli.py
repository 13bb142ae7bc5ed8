import json

import pytest
from typer.testing import CliRunner

from cli.api import build_cli
from cli.constants import TaskKind
from cli.manager import QuantumManager
from settings.app_settings import AppSettings
from shared.exceptions import QuantumException

FOLD_MODEL = {"kind": "fold", "params": {"alpha0": 6.75, "alpha1": -6.0, "alpha2": 1.0}}


@pytest.fixture
def manager() -> QuantumManager:
    return QuantumManager(app_settings=AppSettings(dim=16, log_level="WARNING", log_file=None))


@pytest.fixture
def app(manager):
    return build_cli(manager)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _write_config(tmp_path, document: dict) -> str:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(document))
    return str(path)


def _error(result) -> dict:
    return json.loads(result.output.strip().splitlines()[-1])


def test_report_csv(app, runner, tmp_path):
    config = _write_config(tmp_path, {"model": FOLD_MODEL, "task": {"n_max": 8}})
    out = tmp_path / "report.csv"
    result = runner.invoke(app, ["report", "-c", config, "--out", str(out)])
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == "n,energy,residual,stationary"
    assert len(lines) == 10
    stationary = [line.split(",")[0] for line in lines[1:] if line.endswith(",true")]
    assert stationary == ["1", "4"]
    assert lines[2].startswith("1,1.5,")


def test_report_json_to_stdout(app, runner, tmp_path):
    config = _write_config(tmp_path, {"model": FOLD_MODEL})
    result = runner.invoke(app, ["report", "-c", config, "--format", "json"])
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["stationary_set"] == [1, 4]
    assert document["consistent"] is True
    assert len(document["levels"]) == 12


def test_report_output_is_deterministic(app, runner, tmp_path):
    config = _write_config(tmp_path, {"model": FOLD_MODEL})
    first = tmp_path / "first.csv"
    second = tmp_path / "second.csv"
    runner.invoke(app, ["report", "-c", config, "--out", str(first)])
    runner.invoke(app, ["report", "-c", config, "--out", str(second), "--workers", "3"])
    assert first.read_bytes() == second.read_bytes()


def test_report_margin_violation(app, runner, tmp_path):
    config = _write_config(tmp_path, {"model": FOLD_MODEL, "task": {"n_max": 8}})
    result = runner.invoke(app, ["report", "-c", config, "--dim", "8"])
    assert result.exit_code == 2
    error = _error(result)
    assert error["error"] == "config_error"
    assert error["exit_code"] == 2
    assert "truncation margin" in error["message"]


def test_flags_override_document(manager, tmp_path):
    config = _write_config(
        tmp_path, {"space": {"dim": 20}, "model": FOLD_MODEL, "task": {"tol": 1e-6}}
    )
    run = manager.load_config(TaskKind.REPORT, config, dim=12, tol=1e-8, n_max=None)
    assert run.space.dim == 12
    assert run.task.tol == 1e-8
    assert run.n_max == 7
    assert run.task.kind == TaskKind.REPORT


def test_settings_supply_defaults(manager):
    run = manager.load_config(TaskKind.SPECTRUM)
    assert run.space.dim == 16
    assert run.task.svd_tol == 1e-9
    assert run.model is None


def test_unknown_config_key_is_rejected(app, runner, tmp_path):
    config = _write_config(tmp_path, {"model": FOLD_MODEL, "colour": "blue"})
    result = runner.invoke(app, ["report", "-c", config])
    assert result.exit_code == 2
    assert _error(result)["error"] == "config_error"


def test_invalid_json_is_a_config_error(app, runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    result = runner.invoke(app, ["report", "-c", str(path)])
    assert result.exit_code == 2


def test_missing_config_file(manager, tmp_path):
    with pytest.raises(QuantumException) as e:
        manager.load_config(TaskKind.REPORT, str(tmp_path / "absent.json"))
    assert int(e.value.exit_code) == 2


def test_report_needs_a_model(app, runner):
    result = runner.invoke(app, ["report"])
    assert result.exit_code == 2
    assert "model" in _error(result)["message"]


def test_scan_lambda_sweep(app, runner, tmp_path):
    config = _write_config(
        tmp_path,
        {"task": {"grid": {"lambda": {"a": 3.0, "start": -1.0, "stop": 1.0, "num": 201}}}},
    )
    result = runner.invoke(app, ["scan", "-c", config])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == (
        "grid_index,alpha0,alpha1,alpha2,a,lambda,root_low,root_high,stationary_levels,branch"
    )
    assert len(lines) == 202
    hits = [line for line in lines[1:] if line.split(",")[8]]
    assert len(hits) == 1
    assert hits[0].startswith("125,")
    assert hits[0].endswith(",2;3,pair")
    assert lines[101].endswith(",tangency")


def test_scan_alpha_grid_json(app, runner, tmp_path):
    config = _write_config(
        tmp_path,
        {
            "task": {
                "grid": {"alpha": {"alpha0": [6.75, 1.0], "alpha1": [-6.0], "alpha2": [1.0]}}
            },
            "output": {"format": "json"},
        },
    )
    result = runner.invoke(app, ["scan", "-c", config])
    assert result.exit_code == 0, result.output
    records = json.loads(result.stdout)["records"]
    assert records[0]["stationary_levels"] == [1, 4]
    assert records[1]["branch"] == "pair"
    assert records[1]["stationary_levels"] == []


def test_scan_rejects_other_model_families(app, runner, tmp_path):
    config = _write_config(
        tmp_path,
        {
            "model": {"kind": "cosine", "params": {"eps0": 1.0}},
            "task": {"grid": {"lambda": {"a": 3.0, "start": 0.0, "stop": 1.0, "num": 3}}},
        },
    )
    result = runner.invoke(app, ["scan", "-c", config])
    assert result.exit_code == 2


def test_scan_grid_must_be_unique(app, runner, tmp_path):
    config = _write_config(
        tmp_path,
        {
            "task": {
                "grid": {
                    "lambda": {"a": 3.0, "start": 0.0, "stop": 1.0, "num": 3},
                    "alpha": {"alpha0": [1.0], "alpha1": [0.0], "alpha2": [1.0]},
                }
            }
        },
    )
    result = runner.invoke(app, ["scan", "-c", config])
    assert result.exit_code == 2


def test_evolve_from_stdin(app, runner):
    document = {
        "space": {"dim": 8},
        "model": {"kind": "lindblad_hpoly", "params": {"v": [[0.0, 1.0]]}},
        "task": {
            "t_final": 1.0,
            "dt": 1e-3,
            "record_every": 250,
            "cross_check": True,
            "initial_state": {"kind": "superposition", "amplitudes": [1.0, 0.0, 1.0]},
        },
        "output": {"format": "json"},
    }
    result = runner.invoke(app, ["evolve", "-c", "-"], input=json.dumps(document))
    assert result.exit_code == 0, result.output
    trace = json.loads(result.stdout)
    assert trace["steps"] == 1000
    assert len(trace["times"]) == 5
    assert trace["exact_distance"] < 1e-7
    assert max(trace["trace_drift"]) < 1e-12
    assert trace["final_state_real"][0][0] == pytest.approx(0.5, abs=1e-12)


def test_evolve_csv_with_flags(app, runner, tmp_path):
    config = _write_config(tmp_path, {"space": {"dim": 6}, "model": {"kind": "harmonic"}})
    out = tmp_path / "trace.csv"
    result = runner.invoke(
        app,
        ["evolve", "-c", config, "--t-final", "0.5", "--dt", "0.01", "--record-every", "10", "--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == "time,trace_drift,hermiticity_drift,min_eigenvalue,residual"
    assert len(lines) == 7


def test_evolve_rejects_out_of_range_level(app, runner, tmp_path):
    config = _write_config(
        tmp_path,
        {"space": {"dim": 6}, "model": {"kind": "harmonic"}, "task": {"initial_state": {"n": 6}}},
    )
    result = runner.invoke(app, ["evolve", "-c", config])
    assert result.exit_code == 2


def test_nullspace_csv(app, runner, tmp_path):
    config = _write_config(tmp_path, {"space": {"dim": 6}, "model": {"kind": "harmonic"}})
    result = runner.invoke(app, ["nullspace", "-c", config])
    assert result.exit_code == 0, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == "index,residual,hermitian"
    assert len(lines) == 7
    assert all(line.endswith(",true") for line in lines[1:])


def test_spectrum_json(app, runner, tmp_path):
    config = _write_config(tmp_path, {"model": {"kind": "harmonic"}})
    result = runner.invoke(app, ["spectrum", "-c", config, "--dim", "4", "--format", "json"])
    assert result.exit_code == 0, result.output
    document = json.loads(result.stdout)
    assert document["model_id"] == "harmonic"
    assert document["zero_count"] == 4
    assert len(document["eigenvalues"]) == 16


def test_invalid_model_params(app, runner, tmp_path):
    config = _write_config(
        tmp_path, {"model": {"kind": "nlo", "params": {"beta": 0.1, "Omega": 1.2, "gamma": 0.2}}}
    )
    result = runner.invoke(app, ["report", "-c", config])
    assert result.exit_code == 2
    assert "gamma" in _error(result)["message"]


def test_unwritable_output_is_a_config_error(app, runner, tmp_path):
    config = _write_config(tmp_path, {"model": FOLD_MODEL, "task": {"n_max": 8}})
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    result = runner.invoke(app, ["report", "-c", config, "--out", str(blocker / "report.csv")])
    assert result.exit_code == 2
    error = _error(result)
    assert error["error"] == "config_error"
    assert "Cannot write output" in error["message"]


def test_scan_rejects_model_params(app, runner, tmp_path):
    config = _write_config(
        tmp_path,
        {
            "model": FOLD_MODEL,
            "task": {"grid": {"lambda": {"a": 3.0, "start": 0.0, "stop": 1.0, "num": 3}}},
        },
    )
    result = runner.invoke(app, ["scan", "-c", config])
    assert result.exit_code == 2
    assert "params" in _error(result)["message"]


def test_scan_json_uses_lambda_key(app, runner, tmp_path):
    config = _write_config(
        tmp_path,
        {
            "task": {"grid": {"lambda": {"a": 3.0, "start": 0.25, "stop": 0.25, "num": 1}}},
            "output": {"format": "json"},
        },
    )
    result = runner.invoke(app, ["scan", "-c", config])
    assert result.exit_code == 0, result.output
    record = json.loads(result.stdout)["records"][0]
    assert record["lambda"] == 0.25
    assert "lam" not in record
    assert record["stationary_levels"] == [2, 3]
