import json
import os

import pytest

from solwave.cli import main, normalize_config

CUBIC_POT = {"mass_sq": 1.0, "terms": [{"coupling": 1.0, "exponent": 4}]}


def _write_config(tmp_path, **extra):
    cfg = {"potential": CUBIC_POT, "omega": 0.8, "n": 1, "k": 0,
           "output_dir": str(tmp_path / "out")}
    cfg.update(extra)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return path


class TestConfig:
    def test_normalize_idempotent(self):
        cfg = normalize_config({"potential": CUBIC_POT, "omega": 0.8,
                                "velocities": [0.3], "n": 2})
        assert normalize_config(cfg) == cfg

    def test_defaults_filled(self):
        cfg = normalize_config({"potential": CUBIC_POT})
        assert cfg["tolerances"]["tol_s"] == 1e-13
        assert cfg["evolve"]["dt"] == 0.01
        assert cfg["grid"]["h"] == 0.05

    def test_superluminal_rejected(self):
        with pytest.raises(Exception):
            normalize_config({"potential": CUBIC_POT, "velocities": [1.2]})


class TestExitCodes:
    def test_solve_ok(self, tmp_path, capsys):
        cfg = _write_config(tmp_path)
        assert main(["solve", "--config", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert "shoot_param = 0.84852813" in out
        outdir = tmp_path / "out"
        assert (outdir / "wave_n1k0.csv").exists()
        assert (outdir / "wave_n1k0.json").exists()
        assert (outdir / "manifest.json").exists()

    def test_omega_above_mass_is_config_error(self, tmp_path, capsys):
        cfg = _write_config(tmp_path, omega=1.2)
        assert main(["solve", "--config", str(cfg)]) == 1
        assert "S1" in capsys.readouterr().err

    def test_k_with_wrong_dimension_is_config_error(self, tmp_path, capsys):
        cfg = _write_config(tmp_path, n=3, k=1)
        assert main(["solve", "--config", str(cfg)]) == 1

    def test_no_bracket_is_numerical_error(self, tmp_path, capsys):
        pot = {"mass_sq": 1.0, "terms": [{"coupling": -1.0, "exponent": 4}],
               "amplitude_cap": 5.0}
        cfg = _write_config(tmp_path, potential=pot)
        assert main(["solve", "--config", str(cfg)]) == 2
        assert "NoBracket" in capsys.readouterr().err

    def test_check_ok(self, tmp_path, capsys):
        cfg = _write_config(tmp_path)
        assert main(["check", "--config", str(cfg)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["e0"] == pytest.approx(1.824, rel=1e-6)

    def test_check_zero_tolerance_fails(self, tmp_path, capsys):
        cfg = _write_config(tmp_path, tolerances={"quadrature_tol": 0.0})
        assert main(["check", "--config", str(cfg)]) == 2

    def test_boost_scan_ok(self, tmp_path):
        cfg = _write_config(tmp_path, velocities=[0.0, 0.5], grid={"h": 0.05})
        assert main(["boost-scan", "--config", str(cfg)]) == 0
        assert (tmp_path / "out" / "boost_scan.csv").exists()
        assert (tmp_path / "out" / "boost_scan.json").exists()

    def test_boost_scan_empty_velocities(self, tmp_path):
        cfg = _write_config(tmp_path, velocities=[], grid={"h": 0.1})
        assert main(["boost-scan", "--config", str(cfg)]) == 0
        rows = (tmp_path / "out" / "boost_scan.csv").read_text().strip().splitlines()
        assert len(rows) == 1  # header only

    def test_boost_scan_zero_tolerance_fails(self, tmp_path):
        cfg = _write_config(tmp_path, velocities=[0.3], grid={"h": 0.1},
                            tolerances={"scan_rel_err": 0.0})
        assert main(["boost-scan", "--config", str(cfg)]) == 2

    def test_boost_scan_grid_too_small(self, tmp_path, capsys):
        cfg = _write_config(tmp_path, velocities=[0.5],
                            grid={"h": 0.1, "extent": [5.0], "points": [100]})
        assert main(["boost-scan", "--config", str(cfg)]) == 2
        assert "GridTooSmall" in capsys.readouterr().err

    def test_evolve_cfl_violation(self, tmp_path, capsys):
        cfg = _write_config(tmp_path, velocities=[0.0], grid={"h": 0.1},
                            evolve={"t_final": 1.0, "dt": 0.2, "diag_stride": 1})
        assert main(["evolve", "--config", str(cfg)]) == 2
        assert "CflViolation" in capsys.readouterr().err

    def test_evolve_ok(self, tmp_path, capsys):
        cfg = _write_config(tmp_path, velocities=[0.5], grid={"h": 0.1},
                            evolve={"t_final": 1.0, "dt": 0.05, "diag_stride": 5},
                            tolerances={"speed_rel_err": 0.02})
        assert main(["evolve", "--config", str(cfg)]) == 0
        assert "fitted speed" in capsys.readouterr().out
        assert (tmp_path / "out" / "evolution.csv").exists()


class TestDeterminism:
    def test_solve_outputs_byte_identical(self, tmp_path):
        cfg = _write_config(tmp_path)
        assert main(["solve", "--config", str(cfg)]) == 0
        outdir = tmp_path / "out"
        first = {f: (outdir / f).read_bytes() for f in os.listdir(outdir)}
        assert main(["solve", "--config", str(cfg)]) == 0
        second = {f: (outdir / f).read_bytes() for f in os.listdir(outdir)}
        assert first == second

    def test_set_overrides(self, tmp_path, capsys):
        cfg = _write_config(tmp_path)
        code = main(["solve", "--config", str(cfg), "--set", "omega=0.6",
                     "--set", f"output_dir={tmp_path / 'out2'}"])
        assert code == 0
        assert (tmp_path / "out2" / "manifest.json").exists()
        manifest = json.loads((tmp_path / "out2" / "manifest.json").read_text())
        assert manifest["config"]["omega"] == 0.6

    def test_manifest_lists_artifacts(self, tmp_path):
        cfg = _write_config(tmp_path)
        main(["solve", "--config", str(cfg)])
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["artifacts"] == ["wave_n1k0.csv", "wave_n1k0.json"]


def test_demo_runs_end_to_end(tmp_path):
    code = main(["demo", "--set", f"output_dir={tmp_path / 'demo'}"])
    assert code == 0
    produced = set(os.listdir(tmp_path / "demo"))
    assert {"wave_n1k0.csv", "wave_n1k0.json", "report_n1k0.json",
            "boost_scan.csv", "boost_scan.json", "evolution.csv",
            "manifest.json"} <= produced
