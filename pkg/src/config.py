# config.py
"""
Run configuration: dataclass defaults, an optional JSON file, environment
variables and command-line flags, merged in that order (later wins).
"""
from __future__ import annotations

import json
import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Mapping, Optional

from dirac import C_LIGHT
from errors import ConfigError

logger = logging.getLogger(__name__)

PROBLEMS = ("schrodinger", "dirac", "hydrogen-radial")
OUTPUTS = ("report-json", "amplitudes-csv", "momdist-csv", "states-csv")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")

ENV_THREADS = "PLANEWAVE_QM_THREADS"
ENV_LOG_LEVEL = "PLANEWAVE_QM_LOG_LEVEL"

DEFAULT_POTENTIALS = {
    "schrodinger": "harmonic:omega=1",
    "dirac": "dirac-free",
    "hydrogen-radial": "coulomb-radial",
}
DEFAULT_GRIDS = {
    "schrodinger": (1, 128, 20.0),
    "dirac": (1, 128, 40.0),
    "hydrogen-radial": (1, 2048, 40.0),
}
ANALYTIC_GRID = (1, 4096, 40.0)


# -----------------------------
# Value parsers
# -----------------------------
def parse_grid(value) -> tuple[int, int, float]:
    """'1,128,20' or [1, 128, 20] -> (dim, n, extent)."""
    parts = value.split(",") if isinstance(value, str) else list(value)
    if len(parts) != 3:
        raise ValueError(f"grid needs dim,n,extent; got {value!r}")
    dim, n, extent = parts
    return int(dim), int(n), float(extent)


def parse_potential(spec: str) -> tuple[str, dict[str, float]]:
    """'harmonic:omega=1,mass=2' -> ('harmonic', {'omega': 1.0, 'mass': 2.0})."""
    name, _, rest = spec.partition(":")
    params: dict[str, float] = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, raw = item.partition("=")
        if not sep or not key:
            raise ValueError(f"potential parameter {item!r} is not key=value")
        params[key.strip()] = float(raw)
    if not name.strip():
        raise ValueError("potential name is empty")
    return name.strip(), params


def parse_outputs(value) -> tuple[str, ...]:
    items = value.split(",") if isinstance(value, str) else list(value)
    out = tuple(s.strip() for s in items if s.strip())
    unknown = [s for s in out if s not in OUTPUTS]
    if unknown:
        raise ValueError(f"unknown outputs {unknown}; choose from {list(OUTPUTS)}")
    return out


def _positive_int(value) -> int:
    if isinstance(value, bool):
        raise ValueError(f"expected an integer, got {value!r}")
    number = int(value)
    if number < 1:
        raise ValueError(f"must be >= 1, got {number}")
    return number


def _flag(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {value!r}")


def _choice(options):
    def convert(value) -> str:
        text = str(value)
        if text not in options:
            raise ValueError(f"expected one of {list(options)}, got {text!r}")
        return text
    return convert


def _log_level(value) -> str:
    return _choice(LOG_LEVELS)(str(value).upper())


CONVERTERS = {
    "problem": _choice(PROBLEMS),
    "potential": str,
    "grid": parse_grid,
    "mass": float,
    "charge": float,
    "c": float,
    "count": _positive_int,
    "outputs": parse_outputs,
    "seed": int,
    "out_dir": str,
    "analytic": _flag,
    "states": str,
    "threads": _positive_int,
    "log_level": _log_level,
}


# -----------------------------
# RunConfig
# -----------------------------
@dataclass(frozen=True)
class RunConfig:
    problem: str = "schrodinger"
    potential: Optional[str] = None
    grid: Optional[tuple[int, int, float]] = None
    mass: float = 1.0
    charge: float = -1.0
    c: float = C_LIGHT
    count: int = 1
    outputs: tuple[str, ...] = ("report-json",)
    seed: int = 42
    out_dir: str = "output"
    analytic: bool = False
    states: Optional[str] = None
    threads: Optional[int] = None
    log_level: str = "INFO"

    @property
    def potential_spec(self) -> str:
        return self.potential or DEFAULT_POTENTIALS[self.problem]

    @property
    def potential_name(self) -> str:
        return parse_potential(self.potential_spec)[0]

    @property
    def potential_params(self) -> dict[str, float]:
        return parse_potential(self.potential_spec)[1]

    @property
    def resolved_grid(self) -> tuple[int, int, float]:
        if self.grid is not None:
            return self.grid
        if self.problem == "hydrogen-radial" and self.analytic:
            return ANALYTIC_GRID
        return DEFAULT_GRIDS[self.problem]

    @property
    def rest_energy(self) -> float:
        return self.mass * self.c**2

    def wants(self, output: str) -> bool:
        return output in self.outputs

    def validate(self) -> "RunConfig":
        if self.mass <= 0:
            raise ConfigError("mass", f"must be positive, got {self.mass}")
        if self.c <= 0:
            raise ConfigError("c", f"must be positive, got {self.c}")
        try:
            name, _ = parse_potential(self.potential_spec)
        except ValueError as exc:
            raise ConfigError("potential", str(exc)) from exc
        if self.problem == "hydrogen-radial" and name != "coulomb-radial":
            raise ConfigError("potential", f"hydrogen-radial uses 'coulomb-radial', got {name!r}")
        if self.problem == "dirac" and not name.startswith("dirac-"):
            raise ConfigError("potential", f"dirac problems take dirac-* presets, got {name!r}")
        if self.problem == "schrodinger" and (name.startswith("dirac-") or name == "coulomb-radial"):
            raise ConfigError("potential", f"{name!r} is not a Schrodinger preset")
        return self

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["grid"] = list(self.resolved_grid)
        out["potential"] = self.potential_spec
        out["outputs"] = list(self.outputs)
        return out


def coerce(values: Mapping[str, Any], source: str) -> dict[str, Any]:
    """Convert raw values to field types; unknown keys are errors."""
    out = {}
    for key, raw in values.items():
        if key not in CONVERTERS:
            raise ConfigError(key, f"unknown setting in {source}")
        if raw is None:
            continue
        try:
            out[key] = CONVERTERS[key](raw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(key, f"bad value {raw!r} in {source}: {exc}") from exc
    return out


def load_config_file(path: str) -> dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError("config", f"{path} is not valid JSON: {exc.msg} (line {exc.lineno})") from exc
    if not isinstance(data, dict):
        raise ConfigError("config", f"{path} must hold a JSON object")
    return coerce(data, path)


def env_overrides(environ: Optional[Mapping[str, str]] = None) -> dict[str, Any]:
    environ = os.environ if environ is None else environ
    raw = {}
    if environ.get(ENV_THREADS):
        raw["threads"] = environ[ENV_THREADS]
    if environ.get(ENV_LOG_LEVEL):
        raw["log_level"] = environ[ENV_LOG_LEVEL]
    try:
        return coerce(raw, "environment")
    except ConfigError as exc:
        env_name = ENV_THREADS if exc.key == "threads" else ENV_LOG_LEVEL
        raise ConfigError(env_name, str(exc)) from exc


def build_config(
    flags: Optional[Mapping[str, Any]] = None,
    config_path: Optional[str] = None,
    environ: Optional[Mapping[str, str]] = None,
) -> RunConfig:
    """defaults < JSON file < environment < flags."""
    merged: dict[str, Any] = {}
    if config_path:
        merged.update(load_config_file(config_path))
    merged.update(env_overrides(environ))
    merged.update(coerce({k: v for k, v in (flags or {}).items() if v is not None}, "command line"))
    known = {f.name for f in fields(RunConfig)}
    cfg = replace(RunConfig(), **{k: v for k, v in merged.items() if k in known})
    logger.debug("run config: %s", cfg)
    return cfg.validate()
