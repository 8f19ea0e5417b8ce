import json
import os

import pytest

from app import EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_OK, main
from utils.config import THREADS_ENV
from utils.reports import validate


@pytest.fixture(autouse=True)
def capped_threads(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "2")


def _report(out, command):
    with open(os.path.join(out, f"{command}-report.json")) as f:
        report = json.load(f)
    validate(report, "report-v1")
    return report


def test_verify_null_base(tmp_path):
    out = str(tmp_path)
    assert main(["verify", "--gallery", "1.5", "--tol", "1e-9", "--out", out]) == EXIT_OK
    report = _report(out, "verify")
    assert report["passed"] is True
    assert report["result"]["verification"]["candidate"] == "1.5"
    assert report["config"]["gallery"] == "1.5"


def test_verify_printed_null_fiber_fails_on_first_equation(tmp_path):
    out = str(tmp_path)
    assert main(["verify", "--gallery", "1.8", "--out", out]) == EXIT_CHECK_FAILED
    verification = _report(out, "verify")["result"]["verification"]
    residual = dict(zip(verification["equations"], verification["sup_residuals"]))
    assert residual["E1"] == pytest.approx(1.0, rel=0.01)


def test_verify_theta_free_variant(tmp_path):
    out = str(tmp_path)
    assert main(["verify", "--gallery", "null-fiber", "--variant", "theta-free", "--out", out]) == EXIT_OK


def test_oracle_null_base(tmp_path):
    out = str(tmp_path / "out")
    run_file = tmp_path / "run.json"
    run_file.write_text(json.dumps({"command": "oracle", "gallery": "1.5", "overrides": {"k": 0.5}}))
    code = main(["oracle", "--config", str(run_file), "--step", "1e-3", "--step", "5e-4", "--out", out])
    assert code == EXIT_OK
    oracle = _report(out, "oracle")["result"]["oracle"]
    assert oracle["steps"] == [1e-3, 5e-4]
    assert oracle["ratio_range"] == [3.0, 5.0]
    assert oracle["within_max_error"] is True


def test_oracle_coarse_steps_fail_error_bound(tmp_path):
    out = str(tmp_path)
    code = main(["oracle", "--gallery", "1.5", "--step", "1e-1", "--step", "5e-2", "--out", out])
    assert code == EXIT_CHECK_FAILED
    oracle = _report(out, "oracle")["result"]["oracle"]
    assert oracle["within_max_error"] is False
    assert oracle["exact"] is False


def test_oracle_flat_is_exact(tmp_path):
    out = str(tmp_path)
    assert main(["oracle", "--gallery", "flat", "--out", out]) == EXIT_OK
    oracle = _report(out, "oracle")["result"]["oracle"]
    assert oracle["exact"] is True


def test_bad_grid_writes_config_error(tmp_path):
    out = str(tmp_path)
    assert main(["verify", "--gallery", "1.5", "--grid", "1:0:5", "--out", out]) == EXIT_CONFIG
    report = _report(out, "verify")
    assert report["config"] is None
    assert report["error"]["type"] == "ConfigError"


def test_unknown_gallery_entry(tmp_path):
    out = str(tmp_path)
    assert main(["verify", "--gallery", "1.7", "--out", out]) == EXIT_CONFIG
    assert "1.7" in _report(out, "verify")["error"]["message"]


def test_construct_case2(tmp_path):
    out = str(tmp_path)
    assert main(["construct", "--case", "2", "--grid=-1:1:5", "--out", out]) == EXIT_OK
    report = _report(out, "construct")
    assert report["outputs"] == ["profiles.json"]
    assert report["result"]["case_params"]["case_id"] == 2
    with open(os.path.join(out, "profiles.json")) as f:
        profiles = json.load(f)
    validate(profiles, "profile-v1")
    assert set(profiles["profiles"]) == {"phi", "f", "h", "u", "tau"}


def test_gallery_listing(tmp_path):
    out = str(tmp_path)
    assert main(["gallery", "--out", out]) == EXIT_OK
    entries = _report(out, "gallery")["result"]["entries"]
    assert [e["name"] for e in entries][:2] == ["1.10", "1.5"]


def test_geodesic_from_run_file(tmp_path):
    out = str(tmp_path / "out")
    run_file = tmp_path / "run.json"
    run_file.write_text(json.dumps({
        "command": "geodesic",
        "gallery": "flat",
        "init": {"position": [0.0, 0.0, 0.0, 0.0], "velocity": [1.0, 0.0, 0.5, 0.0]},
        "s_max": 5.0,
    }))
    assert main(["geodesic", "--config", str(run_file), "--out", out]) == EXIT_OK
    with open(os.path.join(out, "trajectory.csv")) as f:
        assert f.readline().strip() == "s,x1,x2,x3,x4,v1,v2,v3,v4,drift"
    trajectory = _report(out, "geodesic")["result"]["trajectory"]
    assert trajectory["early"] is False


def test_probe_summary(tmp_path):
    out = str(tmp_path)
    assert main(["probe", "--gallery", "flat", "--count", "3", "--s-max", "10", "--out", out]) == EXIT_OK
    with open(os.path.join(out, "probe-summary.json")) as f:
        summary = json.load(f)
    validate(summary, "probe-v1")
    assert summary["early_terminations"] == 0


def test_reruns_are_byte_identical(tmp_path):
    out = str(tmp_path)
    path = os.path.join(out, "probe-summary.json")
    args = ["probe", "--gallery", "flat", "--count", "3", "--s-max", "10", "--seed", "9", "--out", out]
    main(args)
    with open(path, "rb") as f:
        first = f.read()
    main(args)
    with open(path, "rb") as f:
        assert f.read() == first
