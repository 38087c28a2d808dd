import json
import os

import numpy as np
import pytest

from curvedflux import cli
from curvedflux.config import parse_config
from curvedflux.csvio import SCHEMAS
from curvedflux.errors import ConfigError


def write_cfg(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


MINIMAL_RIEMANNIAN = """
[run]
solver = riemannian
"""

GOWDY_SMALL = """
[run]
solver = gowdy

[gowdy]
initial = standing_wave
n_cells = 48

[numerics]
t_end = 0.1
record_every = 8
"""


class TestParseConfig:
    def test_minimal_defaults_materialized(self, tmp_path):
        cfg = parse_config(write_cfg(tmp_path, MINIMAL_RIEMANNIAN))
        assert cfg.solver == "riemannian"
        assert cfg["numerics"]["cfl"] == 0.45
        assert cfg["numerics"]["numerical_flux"] == "rusanov"
        assert cfg["flux"]["family"] == "burgers_1d"
        assert cfg["mesh"]["n_cells"] == 128

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            parse_config(str(tmp_path / "absent.ini"))

    def test_empty_file(self, tmp_path):
        with pytest.raises(ConfigError, match="empty"):
            parse_config(write_cfg(tmp_path, ""))

    def test_sound_speed_validation(self, tmp_path):
        text = "[run]\nsolver = gowdy\n[gowdy]\nc_s = 1.2\n"
        with pytest.raises(ConfigError, match="0 < c_s < 1"):
            parse_config(write_cfg(tmp_path, text))

    def test_unknown_family_lists_names(self, tmp_path):
        text = "[run]\nsolver = riemannian\n[flux]\nfamily = upwind\n"
        with pytest.raises(ConfigError, match="burgers_1d"):
            parse_config(write_cfg(tmp_path, text))

    def test_unknown_key_rejected(self, tmp_path):
        text = "[run]\nsolver = riemannian\n[numerics]\ncf1 = 0.5\n"
        with pytest.raises(ConfigError, match="unknown key"):
            parse_config(write_cfg(tmp_path, text))

    def test_dimension_consistency(self, tmp_path):
        text = "[run]\nsolver = riemannian\n[flux]\nfamily = stream_2d\n"
        with pytest.raises(ConfigError, match="torus"):
            parse_config(write_cfg(tmp_path, text))


class TestExitCodes:
    def test_run_ok(self, tmp_path, capsys):
        cfgp = write_cfg(tmp_path, GOWDY_SMALL)
        code = cli.main(["run", "--config", cfgp, "--out", str(tmp_path / "out")])
        assert code == 0
        assert "verdict=completed" in capsys.readouterr().out

    def test_config_error_is_2(self, tmp_path, capsys):
        code = cli.main(["run", "--config", str(tmp_path / "none.ini")])
        assert code == 2

    def test_validate(self, tmp_path, capsys):
        cfgp = write_cfg(tmp_path, MINIMAL_RIEMANNIAN)
        assert cli.main(["validate", "--config", cfgp]) == 0
        assert "ok" in capsys.readouterr().out

    def test_schemas_prints_headers(self, capsys):
        assert cli.main(["schemas"]) == 0
        out = capsys.readouterr().out
        assert "t,l1,l2,linf,mass" in out
        assert "gowdy_series.csv" in out

    def test_numerical_failure_is_3(self, tmp_path, capsys):
        # transport speed beyond the light cone of the wavy lapse: the
        # time-like check fails at run time
        text = """
[run]
solver = lorentzian

[lorentzian]
foliation = wavy_lapse
flux = transport
transport_speed = 0.95

[numerics]
t_end = 0.05
"""
        code = cli.main(["run", "--config", write_cfg(tmp_path, text),
                         "--out", str(tmp_path / "out")])
        assert code == 3
        assert "time-like" in capsys.readouterr().err


class TestOutputs:
    def test_riemannian_outputs(self, tmp_path):
        text = """
[run]
solver = riemannian

[mesh]
n_cells = 64

[numerics]
t_end = 0.1
record_every = 4
"""
        out = str(tmp_path / "out")
        assert cli.main(["run", "--config", write_cfg(tmp_path, text), "--out", out]) == 0
        with open(os.path.join(out, "norms.csv")) as fh:
            header = fh.readline().strip()
        assert header == ",".join(SCHEMAS["norms.csv"])
        with open(os.path.join(out, "summary.json")) as fh:
            summary = json.load(fh)
        assert summary["solver"] == "riemannian"
        assert "norms.csv" in summary["files"]
        for f in summary["files"]:
            assert os.path.exists(os.path.join(out, f))

    def test_gowdy_outputs_and_verdict_column(self, tmp_path):
        out = str(tmp_path / "out")
        assert cli.main(["run", "--config", write_cfg(tmp_path, GOWDY_SMALL),
                         "--out", out]) == 0
        with open(os.path.join(out, "gowdy_series.csv")) as fh:
            rows = fh.read().strip().split("\n")
        assert rows[0] == ",".join(SCHEMAS["gowdy_series.csv"])
        assert rows[-1].endswith("completed")
        assert all(r.endswith("running") for r in rows[1:-1])

    def test_lorentzian_outputs(self, tmp_path):
        text = """
[run]
solver = lorentzian

[lorentzian]
foliation = expanding
flux = burgers_like
amplitude = 0.3
n_cells = 48

[numerics]
t_end = 0.1
record_every = 5
"""
        out = str(tmp_path / "out")
        assert cli.main(["run", "--config", write_cfg(tmp_path, text), "--out", out]) == 0
        for name in ("norms.csv", "traces.csv", "distance.csv"):
            assert os.path.exists(os.path.join(out, name))
        with open(os.path.join(out, "distance.csv")) as fh:
            header = fh.readline().strip()
        assert header == "t,l1_flux_distance"

    def test_blowup_exits_zero_with_verdict(self, tmp_path):
        text = """
[run]
solver = gowdy

[gowdy]
initial = beta_collapse
bt0 = -30.0
n_cells = 32

[numerics]
t_end = 1.0
"""
        out = str(tmp_path / "out")
        code = cli.main(["run", "--config", write_cfg(tmp_path, text), "--out", out])
        assert code == 0
        with open(os.path.join(out, "summary.json")) as fh:
            assert json.load(fh)["verdict"] == "geometry_blowup"

    def test_t_end_zero_reports_initial_only(self, tmp_path):
        text = MINIMAL_RIEMANNIAN + "\n[numerics]\nt_end = 0.0\n"
        out = str(tmp_path / "out")
        assert cli.main(["run", "--config", write_cfg(tmp_path, text), "--out", out]) == 0
        with open(os.path.join(out, "norms.csv")) as fh:
            rows = fh.read().strip().split("\n")
        assert len(rows) == 2  # header + initial record


class TestDeterminism:
    def test_repeat_runs_byte_identical(self, tmp_path):
        cfgp = write_cfg(tmp_path, GOWDY_SMALL)
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        assert cli.main(["run", "--config", cfgp, "--out", out1]) == 0
        assert cli.main(["run", "--config", cfgp, "--out", out2]) == 0
        names1 = sorted(f for f in os.listdir(out1) if f.endswith(".csv"))
        names2 = sorted(f for f in os.listdir(out2) if f.endswith(".csv"))
        assert names1 == names2 and names1
        for name in names1:
            with open(os.path.join(out1, name), "rb") as fh:
                b1 = fh.read()
            with open(os.path.join(out2, name), "rb") as fh:
                b2 = fh.read()
            assert b1 == b2, name

    def test_summary_differs_only_in_wall_time(self, tmp_path):
        cfgp = write_cfg(tmp_path, GOWDY_SMALL)
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        cli.main(["run", "--config", cfgp, "--out", out1])
        cli.main(["run", "--config", cfgp, "--out", out2])
        with open(os.path.join(out1, "summary.json")) as fh:
            s1 = json.load(fh)
        with open(os.path.join(out2, "summary.json")) as fh:
            s2 = json.load(fh)
        s1.pop("wall_time_s"), s2.pop("wall_time_s")
        s1.pop("out_dir"), s2.pop("out_dir")
        assert s1 == s2


class TestEnvOverride:
    def test_env_var_out_dir(self, tmp_path, monkeypatch):
        cfgp = write_cfg(tmp_path, GOWDY_SMALL)
        env_out = str(tmp_path / "env_out")
        monkeypatch.setenv(cli.ENV_OUT_DIR, env_out)
        assert cli.main(["run", "--config", cfgp]) == 0
        assert os.path.exists(os.path.join(env_out, "summary.json"))

    def test_flag_beats_env(self, tmp_path, monkeypatch):
        cfgp = write_cfg(tmp_path, GOWDY_SMALL)
        monkeypatch.setenv(cli.ENV_OUT_DIR, str(tmp_path / "env_out"))
        flag_out = str(tmp_path / "flag_out")
        assert cli.main(["run", "--config", cfgp, "--out", flag_out]) == 0
        assert os.path.exists(os.path.join(flag_out, "summary.json"))
        assert not os.path.exists(str(tmp_path / "env_out"))
