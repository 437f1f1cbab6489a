import json

import pytest

from hilbcount.cli import RunConfig, main
from hilbcount.errors import ConfigError

C2_CONFIG = """
[model]
preset = "C2"

[run]
seed = 11

[census]
y = 10000
delta = 2

[tau]
prime = 13
types = ["[1 1]"]
"""


@pytest.fixture
def cfg_file(tmp_path):
    path = tmp_path / "c2.config"
    path.write_text(C2_CONFIG)
    return path


def _summary(d):
    return json.loads((d / "summary.json").read_text())


def test_census(cfg_file, tmp_path):
    out = tmp_path / "a"
    assert main(["census", "--config", str(cfg_file), "--out", str(out)]) == 0
    s = _summary(out)
    assert s["result"]["distinct"] >= 10 and s["seed"] == 11
    lines = (out / "census.jsonl").read_text().splitlines()
    assert len(lines) == s["result"]["distinct"]
    assert (out / "points.csv").read_text().startswith("y,distinct")


def test_tau(cfg_file, tmp_path):
    assert main(["tau", "--config", str(cfg_file), "--out", str(tmp_path)]) == 0
    assert _summary(tmp_path)["result"]["residues"] == [1, 3, 4, 9, 10, 12]


def test_malformed_polynomial(tmp_path, capsys):
    cfg = tmp_path / "bad.config"
    cfg.write_text('[count-points]\npolynomial = "X2^^2 - X1"\n')
    assert main(["count-points", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert "malformed" in capsys.readouterr().err


def test_unknown_key_reports_position(tmp_path, capsys):
    cfg = tmp_path / "bad.config"
    cfg.write_text("[census]\ny = 10000\n  delt = 2\n")
    assert main(["census", "--config", str(cfg), "--out", str(tmp_path)]) == 1
    assert "line 3, column 3" in capsys.readouterr().err
    with pytest.raises(ConfigError) as info:
        RunConfig.from_toml("[nope]\na = 1\n")
    assert info.value.line == 1
    with pytest.raises(ConfigError) as info:
        RunConfig.from_toml("[census]\ny = = 3\n")
    assert info.value.line == 2


def test_wrong_type(tmp_path):
    with pytest.raises(ConfigError):
        RunConfig.from_toml('[census]\ny = "big"\n')


def test_config_roundtrip():
    cfg = RunConfig.from_toml(C2_CONFIG)
    assert RunConfig.from_toml(cfg.to_toml()).tables == cfg.tables


def test_infeasible_exit_code(tmp_path):
    cfg = tmp_path / "g.config"
    cfg.write_text('[frobenius]\ntext = "3, [1 1]"\n')
    assert main(["grunwald", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_flags_override(cfg_file, tmp_path):
    assert main(["census", "--config", str(cfg_file), "--out", str(tmp_path), "--y", "1000", "--seed", "5"]) == 0
    s = _summary(tmp_path)
    assert s["result"]["y"] == 1000 and s["seed"] == 5


@pytest.mark.parametrize("cmd", ["count-points", "count-spec-points", "det-cover", "hilbert", "fit", "grunwald"])
def test_every_command_runs(tmp_path, cmd):
    cfg = tmp_path / "x.config"
    cfg.write_text('[frobenius]\ntext = "5, [1 1]; 7, [2]"\n[hilbert]\nB = 200\n[fit]\nBs = [10, 100, 1000]\n[det-cover]\nB = 30\n')
    assert main([cmd, "--config", str(cfg), "--out", str(tmp_path)]) == 0
    assert _summary(tmp_path)["command"] == cmd


def test_golden_count_points(tmp_path):
    assert main(["count-points", "--B", "100", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "summary.json").read_text() == (
        '{\n  "command": "count-points",\n  "result": {\n    "B": 100,\n    "boundary_included": 0,\n'
        '    "count": 9,\n    "polynomial": "X2^2 - X1^3"\n  },\n  "seed": 0\n}\n'
    )
