"""End-to-end runs of the command-line driver."""

import json

import pandas as pd
import pytest

from config import ENV_THREADS
from main import main


def read_report(out_dir):
    with open(out_dir / "report.json", encoding="utf-8") as fh:
        return json.load(fh)


def test_harmonic_solve(tmp_path):
    code = main([
        "solve", "--problem", "schrodinger", "--potential", "harmonic:omega=1",
        "--grid", "1,128,20", "--count", "10", "--out-dir", str(tmp_path),
    ])
    assert code == 0
    report = read_report(tmp_path)
    assert report["passed"] is True
    energies = [s["energy_hartree"] for s in report["states"]]
    assert energies == pytest.approx([n + 0.5 for n in range(10)], rel=1e-8)
    assert report["metadata"]["config"]["grid"] == [1, 128, 20.0]
    assert "numpy" in report["metadata"]["versions"]


def test_harmonic_frequency_is_kept_for_heavier_mass(tmp_path):
    code = main([
        "solve", "--potential", "harmonic:omega=1", "--mass", "2", "--count", "2", "--out-dir", str(tmp_path),
    ])
    assert code == 0
    energies = [s["energy_hartree"] for s in read_report(tmp_path)["states"]]
    assert energies == pytest.approx([0.5, 1.5], rel=1e-8)


def test_hydrogen_solve_in_hartree_and_ev(tmp_path):
    code = main(["solve", "--problem", "hydrogen-radial", "--out-dir", str(tmp_path)])
    assert code == 0
    state = read_report(tmp_path)["states"][0]
    assert state["energy_hartree"] == pytest.approx(-0.5, abs=0.005)
    assert state["energy_ev"] == pytest.approx(-13.6, abs=0.14)


def test_bad_grid_exits_1(tmp_path, capsys):
    code = main(["solve", "--grid", "1,100,20", "--out-dir", str(tmp_path)])
    assert code == 1
    assert "power of two" in capsys.readouterr().err


def test_bad_subcommand_exits_1():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 1


def test_bad_flag_value_exits_1():
    with pytest.raises(SystemExit) as info:
        main(["solve", "--count", "many"])
    assert info.value.code == 1


# -----------------------------
# verify
# -----------------------------
def solve_with_states(out_dir):
    code = main([
        "solve", "--count", "3", "--outputs", "report-json,states-csv", "--out-dir", str(out_dir),
    ])
    assert code == 0
    return out_dir / "states.csv"


def test_verify_stored_states(tmp_path):
    states = solve_with_states(tmp_path / "solve")
    out = tmp_path / "verify"
    assert main(["verify", "--states", str(states), "--out-dir", str(out)]) == 0
    report = read_report(out)
    assert report["command"] == "verify"
    assert len(report["states"]) == 3


def test_verify_tampered_energies_exits_2(tmp_path):
    states = solve_with_states(tmp_path / "solve")
    df = pd.read_csv(states)
    df["energy"] += 0.1
    df.to_csv(states, index=False, float_format="%.17g")
    out = tmp_path / "verify"
    assert main(["verify", "--states", str(states), "--out-dir", str(out)]) == 2
    failed = read_report(out)["states"][0]["failed"]
    assert "relation_residual" in failed
    assert "pointwise_l2" in failed


def test_verify_missing_or_corrupt_states_exits_1(tmp_path):
    assert main(["verify", "--states", str(tmp_path / "none.csv"), "--out-dir", str(tmp_path)]) == 1
    corrupt = tmp_path / "corrupt.csv"
    corrupt.write_text("state,energy\n0,0.5\n")
    assert main(["verify", "--states", str(corrupt), "--out-dir", str(tmp_path)]) == 1


def test_verify_states_on_a_different_grid_exits_1(tmp_path):
    states = solve_with_states(tmp_path / "solve")
    code = main(["verify", "--states", str(states), "--grid", "1,64,20", "--out-dir", str(tmp_path)])
    assert code == 1


def test_verify_free_dirac(tmp_path):
    code = main([
        "verify", "--problem", "dirac", "--potential", "dirac-free", "--grid", "1,32,40",
        "--count", "2", "--out-dir", str(tmp_path),
    ])
    assert code == 0
    state = read_report(tmp_path)["states"][0]
    assert state["branch"] == "positive"
    assert state["binding_energy"] == pytest.approx(0.0, abs=1e-6)


# -----------------------------
# momdist
# -----------------------------
def test_momdist_from_solved_state(tmp_path):
    assert main(["momdist", "--problem", "hydrogen-radial", "--out-dir", str(tmp_path)]) == 0
    df = pd.read_csv(tmp_path / "momdist.csv")
    assert list(df.columns) == ["p", "amplitude", "density", "closed_form", "rel_error"]
    assert len(df) == 400
    assert df.loc[df["p"] <= 5.0, "rel_error"].max() < 1e-3


def test_momdist_analytic(tmp_path):
    code = main(["momdist", "--problem", "hydrogen-radial", "--analytic", "--out-dir", str(tmp_path)])
    assert code == 0
    checks = {c["name"]: c for c in read_report(tmp_path)["checks"]}
    assert checks["momdist max rel error (p <= 5)"]["value"] < 1e-6
    assert checks["momdist normalization"]["passed"]


def test_momdist_needs_hydrogen(tmp_path):
    assert main(["momdist", "--problem", "schrodinger", "--out-dir", str(tmp_path)]) == 1


# -----------------------------
# Configuration sources
# -----------------------------
def test_flags_override_config_file(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"count": 4, "out_dir": str(tmp_path / "from_file")}))
    assert main(["solve", "--config", str(config), "--count", "2"]) == 0
    assert len(read_report(tmp_path / "from_file")["states"]) == 2


def test_unknown_config_key_exits_1(tmp_path, capsys):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"colour": "blue"}))
    assert main(["solve", "--config", str(config), "--out-dir", str(tmp_path)]) == 1
    assert "colour" in capsys.readouterr().err


def test_bad_environment_exits_1(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_THREADS, "lots")
    assert main(["solve", "--out-dir", str(tmp_path)]) == 1


def test_thread_cap(tmp_path, monkeypatch):
    monkeypatch.setenv(ENV_THREADS, "1")
    assert main(["solve", "--out-dir", str(tmp_path)]) == 0
    assert read_report(tmp_path)["metadata"]["config"]["threads"] == 1


# -----------------------------
# demo
# -----------------------------
def test_demo_is_reproducible(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    assert main(["demo", "--out-dir", str(first)]) == 0
    assert main(["demo", "--out-dir", str(second)]) == 0
    for name in ("amplitudes.csv", "momdist.csv", "demo_checks.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()
    checks = pd.read_csv(first / "demo_checks.csv")
    assert checks["passed"].all()
