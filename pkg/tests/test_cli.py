import json

import pytest

from griffith_lab.cli import TASKS, default_config, main, run
from griffith_lab.errors import ConfigError


def write_config(tmp_path, cfg, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return path


def run_cli(tmp_path, cfg, subdir="out", extra=()):
    cfg_path = write_config(tmp_path, cfg)
    out = tmp_path / subdir
    code = main(["--config", str(cfg_path), "--out", str(out), *extra])
    return code, out


def test_default_configs_round_trip(tmp_path):
    # schema closure: every default serializes, parses, and re-validates
    for task in TASKS:
        cfg = default_config(task)
        blob = json.dumps(cfg)
        assert json.loads(blob) == cfg


@pytest.mark.parametrize("task", ["degiorgi", "chainrule", "validate"])
def test_default_configs_execute(tmp_path, task):
    cfg = default_config(task)
    if task == "degiorgi":
        cfg["j_max"] = 8
        cfg["xi_grid"]["count"] = 11
    code, out = run_cli(tmp_path, cfg, subdir=task)
    assert code == 0
    assert (out / "report.json").exists()
    assert (out / "series.csv").exists()


def test_missing_quadrature_key_rejected(tmp_path):
    cfg = default_config("chainrule")
    cfg["quadrature"]["panels"] = 4  # unknown key
    code, _ = run_cli(tmp_path, cfg)
    assert code == 1


def test_unknown_task_rejected(tmp_path):
    code, _ = run_cli(tmp_path, {"task": "optimize"})
    assert code == 1


def test_unknown_key_names_the_offender(tmp_path, capsys):
    cfg = default_config("lsc")
    cfg["recipe"]["rate"] = 2
    code, _ = run_cli(tmp_path, cfg)
    assert code == 1
    assert "rate" in capsys.readouterr().err


def test_certify_catalog_iii_passes(tmp_path):
    cfg = default_config("certify")
    cfg["sample_count"] = 60
    code, out = run_cli(tmp_path, cfg, subdir="certify")
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["verdict"] == "PASS"


def test_lsc_expected_violation_flips_exit_code(tmp_path):
    cfg = default_config("lsc")
    cfg["integrand"] = {
        "kind": "custom_theta",
        "theta": {"kind": "two_slope", "slope": 1.0, "s0": 1.0, "slope2": 2.0},
    }
    cfg["recipe"] = {
        "kind": "jump_splitting",
        "base": {"kind": "step", "domain": [0.0, 1.0], "at": 0.5, "left": 0.0, "right": 2.0},
        "n_max": 64,
    }
    cfg["expect_violation"] = True
    code, out = run_cli(tmp_path, cfg, subdir="lsc")
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["verdict"] == "VIOLATED"
    assert report["gap"] == pytest.approx(1.0, abs=1e-12)


def test_minimize_with_oracle(tmp_path):
    cfg = default_config("minimize")
    cfg["model"]["n_elements"] = 4
    cfg["model"]["values"]["count"] = 8
    cfg["oracle"] = True
    code, out = run_cli(tmp_path, cfg, subdir="minimize")
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["oracle_matches"] is True


def test_validate_negative_control_exit_two(tmp_path):
    cfg = default_config("validate")
    cfg["field"] = {"kind": "swap_2d"}
    cfg["box"] = {"x": [[0.0, 0.0], [1.0, 1.0]], "r": [[0.0, 0.0], [1.0, 1.0]]}
    cfg["grid"] = 8
    code, out = run_cli(tmp_path, cfg, subdir="validate")
    assert code == 2
    cfg["expect_violation"] = True
    code, _ = run_cli(tmp_path, cfg, subdir="validate2")
    assert code == 0


def test_reports_are_byte_identical_across_runs(tmp_path):
    cfg = default_config("chainrule")
    _, out1 = run_cli(tmp_path, cfg, subdir="run1")
    _, out2 = run_cli(tmp_path, cfg, subdir="run2")
    assert (out1 / "report.json").read_bytes() == (out2 / "report.json").read_bytes()
    assert (out1 / "series.csv").read_bytes() == (out2 / "series.csv").read_bytes()


def test_series_format(tmp_path):
    cfg = default_config("chainrule")
    _, out = run_cli(tmp_path, cfg, subdir="fmt")
    blob = (out / "series.csv").read_bytes()
    assert b"\r" not in blob
    lines = blob.decode().strip().split("\n")
    assert lines[0] == "panel_count,abs_residual"
    assert len(lines) >= 4


def test_cli_flag_overrides(tmp_path):
    cfg = default_config("chainrule")
    cfg_path = write_config(tmp_path, cfg)
    out = tmp_path / "flags"
    code = main(
        ["--config", str(cfg_path), "--out", str(out), "--quad-panels", "8", "--quad-order", "6"]
    )
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert report["n_panels"] == 8
    assert report["n_gauss"] == 6
