# ------------------------------------------------------------
# report.py
# JSON run report and CSV artifacts
# ------------------------------------------------------------
from __future__ import annotations

import json
import logging
import os
import platform
from dataclasses import dataclass, field
from typing import Any, Iterable, Optional, Sequence

import numpy as np
import pandas as pd
import scipy

from errors import StateFileError

logger = logging.getLogger(__name__)

HARTREE_TO_EV = 27.211386245988
CSV_FLOAT_FORMAT = "%.17g"

STATE_COLUMNS = ["state", "energy", "index", "component", "re", "im"]
AXIS_COLUMNS = ("x", "y", "z")


def to_ev(hartree: float) -> float:
    return float(hartree) * HARTREE_TO_EV


def library_versions() -> dict[str, str]:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
    }


# -----------------------------
# Report
# -----------------------------
@dataclass
class Report:
    """One JSON document per run: state records plus run metadata."""

    command: str
    problem: str
    states: list[dict] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s["passed"] for s in self.states) and all(c["passed"] for c in self.checks)

    def add_state(self, record: dict) -> None:
        if any(s["index"] == record["index"] for s in self.states):
            raise ValueError(f"state {record['index']} is already in the report")
        self.states.append(record)

    def add_check(self, name: str, value: float, tolerance: float, passed: Optional[bool] = None) -> dict:
        ok = bool(value < tolerance) if passed is None else bool(passed)
        check = {"name": name, "value": float(value), "tolerance": float(tolerance), "passed": ok}
        self.checks.append(check)
        return check

    def failures(self) -> list[str]:
        out = [f"state {s['index']}: {', '.join(s['failed'])}" for s in self.states if not s["passed"]]
        out += [f"{c['name']}: {c['value']:.3e} >= {c['tolerance']:.3e}" for c in self.checks if not c["passed"]]
        return out

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "problem": self.problem,
            "passed": self.passed,
            "states": self.states,
            "checks": self.checks,
            "metadata": self.metadata,
        }

    def summary_frame(self) -> pd.DataFrame:
        rows = [
            {
                "state": s["index"],
                "energy_hartree": s["energy_hartree"],
                "energy_ev": s["energy_ev"],
                "relation_residual": s["relation_residual"],
                "pointwise_l2": s["pointwise_l2"],
                "passed": s["passed"],
            }
            for s in self.states
        ]
        return pd.DataFrame(rows)

    def checks_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.checks, columns=["name", "value", "tolerance", "passed"])

    def write_json(self, path: str) -> str:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.as_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"✅ Saved: {path}")
        return path


# -----------------------------
# CSV artifacts
# -----------------------------
def write_csv(df: pd.DataFrame, path: str) -> str:
    """Header row, ',' separator, 17 significant digits, '\\n' endings."""
    df.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    print(f"✅ Saved: {path}")
    return path


def artifact_path(out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def amplitudes_frame(entries: Iterable[tuple[int, Sequence[str], np.ndarray, np.ndarray]]) -> pd.DataFrame:
    """
    Rows (state, mode, p, re, im, weight). Each entry is (state, mode labels,
    momentum per mode, complex amplitude per mode); multi-axis modes are
    labelled 'kx;ky;kz' with p the momentum magnitude.
    """
    frames = []
    for state, modes, momenta, amplitude in entries:
        a = np.asarray(amplitude, dtype=np.complex128).reshape(-1)
        frames.append(pd.DataFrame({
            "state": np.full(a.size, int(state)),
            "mode": list(modes),
            "p": np.asarray(momenta, dtype=np.float64).reshape(-1),
            "re": a.real,
            "im": a.imag,
            "weight": np.abs(a) ** 2,
        }))
    return pd.concat(frames, ignore_index=True)


def momdist_frame(dist) -> pd.DataFrame:
    return pd.DataFrame({
        "p": dist.momenta,
        "amplitude": dist.amplitude,
        "density": dist.density,
        "closed_form": dist.closed_form,
        "rel_error": dist.rel_error,
    })


def states_frame(records: Iterable[tuple[int, float, np.ndarray, np.ndarray]], axes: int = 1) -> pd.DataFrame:
    """
    Stored states, one row per (state, grid index, component).

    ``records`` yields (state, energy, coordinates, values) with coordinates
    shaped (points, axes) and values shaped (points, components).
    """
    frames = []
    names = list(AXIS_COLUMNS[:axes]) if axes > 1 else ["x"]
    for state, energy, coords, values in records:
        values = np.asarray(values).reshape(len(coords), -1)
        points, comps = values.shape
        frame = pd.DataFrame({
            "state": np.full(points * comps, int(state)),
            "energy": np.full(points * comps, float(energy)),
            "index": np.repeat(np.arange(points), comps),
            "component": np.tile(np.arange(comps), points),
        })
        for axis, name in enumerate(names):
            frame[name] = np.repeat(np.asarray(coords).reshape(points, -1)[:, axis], comps)
        frame["re"] = values.real.reshape(-1)
        frame["im"] = values.imag.reshape(-1)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)


@dataclass(frozen=True)
class StoredState:
    state: int
    energy: float
    values: np.ndarray = field(repr=False)


def read_states_csv(path: str, points: int, components: int = 1) -> list[StoredState]:
    """Load states written by ``states_frame``; values come back shaped (points, components)."""
    try:
        df = pd.read_csv(path)
    except FileNotFoundError as exc:
        raise StateFileError(f"state file {path} not found") from exc
    except (OSError, ValueError, pd.errors.ParserError) as exc:
        raise StateFileError(f"cannot parse state file {path}: {exc}") from exc
    missing = [c for c in STATE_COLUMNS if c not in df.columns]
    if missing:
        raise StateFileError(f"state file {path} lacks columns {missing}")
    if df[STATE_COLUMNS].isnull().any().any():
        raise StateFileError(f"state file {path} has empty cells")

    out = []
    for state, group in df.groupby("state", sort=True):
        energies = group["energy"].unique()
        if len(energies) != 1:
            raise StateFileError(f"state {state} carries {len(energies)} different energies")
        if len(group) != points * components:
            raise StateFileError(
                f"state {state} has {len(group)} rows; the configured grid needs {points * components}"
            )
        group = group.sort_values(["index", "component"], kind="stable")
        if not (np.array_equal(group["index"].to_numpy(), np.repeat(np.arange(points), components))
                and np.array_equal(group["component"].to_numpy(), np.tile(np.arange(components), points))):
            raise StateFileError(f"state {state} does not cover every grid index and component once")
        values = (group["re"].to_numpy() + 1j * group["im"].to_numpy()).reshape(points, components)
        out.append(StoredState(int(state), float(energies[0]), values))
    if not out:
        raise StateFileError(f"state file {path} holds no states")
    return out
