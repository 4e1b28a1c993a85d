"""Configuration layering and value parsing."""

import json

import pytest

from config import (
    ANALYTIC_GRID,
    ENV_LOG_LEVEL,
    ENV_THREADS,
    RunConfig,
    build_config,
    parse_grid,
    parse_outputs,
    parse_potential,
)
from dirac import C_LIGHT
from errors import ConfigError


def test_parse_grid():
    assert parse_grid("1,128,20") == (1, 128, 20.0)
    assert parse_grid([3, 16, 8]) == (3, 16, 8.0)
    with pytest.raises(ValueError):
        parse_grid("1,128")


def test_parse_potential():
    assert parse_potential("harmonic:omega=2,mass=0.5") == ("harmonic", {"omega": 2.0, "mass": 0.5})
    assert parse_potential("free") == ("free", {})
    with pytest.raises(ValueError):
        parse_potential("box:width")
    with pytest.raises(ValueError):
        parse_potential(":a=1")


def test_parse_outputs():
    assert parse_outputs("report-json, states-csv") == ("report-json", "states-csv")
    with pytest.raises(ValueError, match="unknown outputs"):
        parse_outputs("report-pdf")


def test_defaults():
    cfg = build_config(environ={})
    assert cfg == RunConfig()
    assert cfg.potential_spec == "harmonic:omega=1"
    assert cfg.resolved_grid == (1, 128, 20.0)
    assert cfg.c == C_LIGHT
    assert cfg.rest_energy == pytest.approx(C_LIGHT**2)


def test_problem_defaults():
    dirac = build_config({"problem": "dirac"}, environ={})
    assert dirac.potential_name == "dirac-free"
    assert dirac.resolved_grid == (1, 128, 40.0)
    hydrogen = build_config({"problem": "hydrogen-radial", "analytic": True}, environ={})
    assert hydrogen.resolved_grid == ANALYTIC_GRID


def test_precedence(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"count": 3, "threads": 2, "log_level": "debug", "seed": 7}))
    env = {ENV_THREADS: "4"}
    cfg = build_config({"count": 5, "seed": None}, str(path), env)
    assert cfg.count == 5
    assert cfg.threads == 4
    assert cfg.log_level == "DEBUG"
    assert cfg.seed == 7


def test_unknown_key_in_file(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"grid_size": 64}))
    with pytest.raises(ConfigError) as info:
        build_config(config_path=str(path), environ={})
    assert info.value.key == "grid_size"


def test_unreadable_config_file(tmp_path):
    with pytest.raises(ConfigError):
        build_config(config_path=str(tmp_path / "missing.json"), environ={})
    broken = tmp_path / "broken.json"
    broken.write_text("{count: 3")
    with pytest.raises(ConfigError, match="not valid JSON"):
        build_config(config_path=str(broken), environ={})
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    with pytest.raises(ConfigError, match="JSON object"):
        build_config(config_path=str(listing), environ={})


@pytest.mark.parametrize("env, key", [
    ({ENV_THREADS: "zero"}, ENV_THREADS),
    ({ENV_THREADS: "0"}, ENV_THREADS),
    ({ENV_LOG_LEVEL: "chatty"}, ENV_LOG_LEVEL),
])
def test_bad_environment(env, key):
    with pytest.raises(ConfigError) as info:
        build_config(environ=env)
    assert info.value.key == key


@pytest.mark.parametrize("flags", [
    {"problem": "hydrogen-radial", "potential": "harmonic"},
    {"problem": "dirac", "potential": "box:width=1"},
    {"problem": "schrodinger", "potential": "dirac-well"},
    {"problem": "schrodinger", "potential": "coulomb-radial"},
    {"mass": -1.0},
    {"c": 0.0},
    {"count": 0},
    {"problem": "klein-gordon"},
])
def test_invalid_combinations(flags):
    with pytest.raises(ConfigError):
        build_config(flags, environ={})


def test_to_dict_resolves_defaults():
    out = build_config({"problem": "dirac", "outputs": "report-json,states-csv"}, environ={}).to_dict()
    assert out["grid"] == [1, 128, 40.0]
    assert out["potential"] == "dirac-free"
    assert out["outputs"] == ["report-json", "states-csv"]
    json.dumps(out)
