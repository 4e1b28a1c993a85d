"""JSON report and CSV artifacts."""

import json

import numpy as np
import pytest

from errors import StateFileError
from report import (
    HARTREE_TO_EV,
    Report,
    amplitudes_frame,
    read_states_csv,
    states_frame,
    to_ev,
    write_csv,
)


def test_hartree_to_ev():
    assert to_ev(-0.5) == pytest.approx(-13.605693122994)
    assert to_ev(1.0) == HARTREE_TO_EV


def test_report_pass_and_failures(tmp_path):
    report = Report("solve", "schrodinger")
    report.add_state({"index": 0, "passed": True, "failed": []})
    report.add_check("gram", 1e-12, 1e-10)
    assert report.passed
    report.add_check("relation", 1e-3, 1e-8)
    assert not report.passed
    assert report.failures() == ["relation: 1.000e-03 >= 1.000e-08"]
    with pytest.raises(ValueError):
        report.add_state({"index": 0, "passed": True, "failed": []})

    path = report.write_json(str(tmp_path / "report.json"))
    data = json.loads(open(path, encoding="utf-8").read())
    assert data["passed"] is False
    assert data["problem"] == "schrodinger"


def test_csv_format(tmp_path):
    df = amplitudes_frame([(0, ["0", "1"], np.array([0.0, 0.5]), np.array([1 / 3, 0.1j]))])
    path = write_csv(df, str(tmp_path / "amplitudes.csv"))
    raw = open(path, "rb").read()
    assert b"\r\n" not in raw
    lines = raw.decode().splitlines()
    assert lines[0] == "state,mode,p,re,im,weight"
    assert lines[1].startswith("0,0,0,0.33333333333333331,0,")


def test_states_round_trip(tmp_path):
    x = np.linspace(-1, 1, 4)
    values = np.array([[1 + 2j], [0.5], [-0.25j], [0.0]])
    df = states_frame([(0, -0.5, x[:, None], values), (1, 1.5, x[:, None], 2 * values)])
    path = write_csv(df, str(tmp_path / "states.csv"))
    stored = read_states_csv(path, points=4)
    assert [s.state for s in stored] == [0, 1]
    assert stored[0].energy == -0.5
    assert np.array_equal(stored[1].values, 2 * values)


def test_spinor_states_keep_components(tmp_path):
    x = np.arange(2.0)[:, None]
    values = np.arange(8).reshape(2, 4) * (1 + 1j)
    path = write_csv(states_frame([(3, 2.0, x, values)]), str(tmp_path / "states.csv"))
    (stored,) = read_states_csv(path, points=2, components=4)
    assert np.array_equal(stored.values, values)


def test_state_file_errors(tmp_path):
    with pytest.raises(StateFileError, match="not found"):
        read_states_csv(str(tmp_path / "nope.csv"), points=4)
    garbage = tmp_path / "garbage.csv"
    garbage.write_text("just,some\nwords\n")
    with pytest.raises(StateFileError):
        read_states_csv(str(garbage), points=4)
    x = np.linspace(-1, 1, 4)[:, None]
    short = write_csv(states_frame([(0, 1.0, x, np.ones(4))]), str(tmp_path / "short.csv"))
    with pytest.raises(StateFileError, match="configured grid"):
        read_states_csv(short, points=8)
