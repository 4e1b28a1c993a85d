import logging
import time
from contextlib import contextmanager
from typing import NamedTuple, Optional

import numpy as np
import scipy.fft as sfft
from threadpoolctl import threadpool_limits

from basis import WaveFunction, check_aliasing, forward_transform, make_grid
from config import RunConfig
from dirac import (
    C_LIGHT,
    SpinorField,
    dirac_energy_breakdown,
    dirac_spectrum,
    branch_weights,
    free_spectrum,
    make_em_potential,
    make_gammas,
    nonrelativistic_potential,
    paired_spectrum_error,
    solve_dirac,
    spinor_dominant_modes,
    spinor_to_momentum,
    squaring_identity_check,
    theta_residual,
)
from errors import ConfigError
from momentum import (
    box_amplitudes,
    closed_form_energy_relation,
    hydrogen_momentum_distribution,
    radial_dominant_modes,
    two_mode_weight,
)
from report import (
    Report,
    amplitudes_frame,
    library_versions,
    momdist_frame,
    read_states_csv,
    states_frame,
    to_ev,
)
from schrodinger import (
    RadialState,
    analytic_ground_state,
    make_potential,
    make_radial_grid,
    solve_eigen,
    solve_hydrogen_radial,
)
from verify import (
    averaged_vs_pointwise,
    energy_breakdown,
    mix_states,
    pointwise_residual,
    radial_energy_breakdown,
    radial_pointwise_residual,
    relation_tolerance,
)

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DIRAC_TOL = 1e-8
ORTHONORMALITY_TOL = 1e-10
MOMDIST_TOL = 1e-3
MOMDIST_ANALYTIC_TOL = 1e-6
MOMDIST_NORM_TOL = 1e-4


class PipelineResult(NamedTuple):
    report: Report
    frames: dict


# ----------------------------------------------------------------------
# ✅ 1. Runtime environment
# ----------------------------------------------------------------------
def configure_logging(level: str = "INFO") -> None:
    logging.basicConfig(level=getattr(logging, level.upper()), format=LOG_FORMAT, force=True)


@contextmanager
def compute_limits(threads: Optional[int]):
    """Cap BLAS/LAPACK and scipy.fft worker threads for the enclosed work."""
    if threads is None:
        yield
        return
    with threadpool_limits(limits=threads), sfft.set_workers(threads):
        logger.debug("thread cap %d", threads)
        yield


def run_metadata(cfg: RunConfig, timings: dict) -> dict:
    return {
        "config": cfg.to_dict(),
        "versions": library_versions(),
        "timings_s": {k: round(v, 6) for k, v in timings.items()},
    }


# ----------------------------------------------------------------------
# ✅ 2. Problem setup from the run config
# ----------------------------------------------------------------------
def build_potential(cfg: RunConfig):
    dim, n, extent = cfg.resolved_grid
    grid = make_grid(dim, n, extent)
    params = dict(cfg.potential_params)
    if cfg.potential_name == "harmonic":
        # omega is the oscillator frequency of the configured particle
        params.setdefault("mass", cfg.mass)
    return make_potential(grid, cfg.potential_name, **params)


def build_em_potential(cfg: RunConfig):
    dim, n, extent = cfg.resolved_grid
    if dim != 1:
        raise ConfigError("grid", f"Dirac problems run on 1D grids, got dim={dim}")
    grid = make_grid(dim, n, extent)
    return make_em_potential(grid, cfg.potential_name, charge=cfg.charge, **cfg.potential_params)


def hydrogen_settings(cfg: RunConfig) -> tuple[int, float, float]:
    """(n_grid, r_max, Z) for the radial solve; Z = -q for a unit nuclear charge."""
    dim, n, extent = cfg.resolved_grid
    if dim != 1:
        raise ConfigError("grid", f"the radial problem is one-dimensional, got dim={dim}")
    params = cfg.potential_params
    unknown = sorted(set(params) - {"rmax", "n"})
    if unknown:
        raise ConfigError("potential", f"coulomb-radial takes rmax and n, got {unknown}")
    if cfg.charge >= 0:
        raise ConfigError("charge", f"a bound hydrogen electron needs q < 0, got {cfg.charge}")
    return int(params.get("n", n)), float(params.get("rmax", extent)), -cfg.charge


# ----------------------------------------------------------------------
# ✅ 3. Per-state records
# ----------------------------------------------------------------------
def state_record(index, energy, breakdown, residual, modes, tolerance, extra=None) -> dict:
    failed = []
    if breakdown.relation_residual >= tolerance:
        failed.append("relation_residual")
    if residual.pointwise_l2 >= tolerance:
        failed.append("pointwise_l2")
    record = {
        "index": int(index),
        "energy_hartree": float(energy),
        "energy_ev": to_ev(energy),
        **breakdown.as_dict(),
        **residual.as_dict(),
        "tolerance": tolerance,
        "dominant_modes": modes,
    }
    record.update(extra or {})
    record["failed"] = failed
    record["passed"] = not failed
    return record


def schrodinger_record(index: int, psi: WaveFunction, pot, mass: float) -> dict:
    amplitudes = forward_transform(psi)
    return state_record(
        index,
        psi.energy,
        energy_breakdown(psi, pot, mass),
        pointwise_residual(psi, pot, mass),
        amplitudes.dominant_modes(5),
        relation_tolerance(psi.energy),
        {"nyquist_weight": check_aliasing(amplitudes)},
    )


def hydrogen_record(index: int, state: RadialState, mass: float, charge: float) -> dict:
    return state_record(
        index,
        state.energy,
        radial_energy_breakdown(state, mass, charge),
        radial_pointwise_residual(state, mass, charge),
        radial_dominant_modes(state, 5),
        relation_tolerance(state.energy),
    )


def dirac_record(index: int, state: SpinorField, pot, m: float, c: float) -> dict:
    weights = branch_weights(state, m, c)
    return state_record(
        index,
        state.energy,
        dirac_energy_breakdown(state, pot, m, c),
        theta_residual(state, pot, m, c),
        spinor_dominant_modes(state, 5),
        DIRAC_TOL * m * c**2,
        {
            "branch": weights.branch.value,
            "positive_weight": weights.positive,
            "binding_energy": float(m * c**2 - state.energy),
        },
    )


def _gram_check(report: Report, states, weight: float = 1.0) -> None:
    mat = np.array([s.values.reshape(-1) for s in states])
    gram = weight * (mat.conj() @ mat.T)
    report.add_check("orthonormality", float(np.max(np.abs(gram - np.eye(len(states))))), ORTHONORMALITY_TOL)


# ----------------------------------------------------------------------
# ✅ 4. Artifact frames
# ----------------------------------------------------------------------
def _mode_labels(grid) -> tuple[list[str], np.ndarray]:
    slots = np.indices(grid.shape).reshape(grid.dim, -1)
    labels = [";".join(str(grid.axis_modes[s]) for s in col) for col in slots.T]
    if grid.dim == 1:
        return labels, grid.axis_momenta
    return labels, np.sqrt(grid.momentum_squared).reshape(-1)


def wavefunction_frames(cfg: RunConfig, states) -> dict:
    frames = {}
    grid = states[0].grid
    if cfg.wants("amplitudes-csv"):
        labels, momenta = _mode_labels(grid)
        frames["amplitudes-csv"] = amplitudes_frame(
            (i, labels, momenta, forward_transform(psi).values) for i, psi in enumerate(states)
        )
    if cfg.wants("states-csv"):
        coords = np.stack([x.reshape(-1) for x in grid.coordinates], axis=1)
        frames["states-csv"] = states_frame(
            ((i, psi.energy, coords, psi.values.reshape(-1, 1)) for i, psi in enumerate(states)),
            axes=grid.dim,
        )
    return frames


def radial_frames(cfg: RunConfig, states) -> dict:
    frames = {}
    grid = states[0].grid
    if cfg.wants("amplitudes-csv"):
        labels = [str(n) for n in range(1, grid.n)]
        frames["amplitudes-csv"] = amplitudes_frame(
            (i, labels, grid.wavenumbers, s.coefficients) for i, s in enumerate(states)
        )
    if cfg.wants("states-csv"):
        frames["states-csv"] = states_frame(
            (i, s.energy, grid.points[:, None], s.values[:, None]) for i, s in enumerate(states)
        )
    return frames


def spinor_frames(cfg: RunConfig, states) -> dict:
    frames = {}
    grid = states[0].grid
    if cfg.wants("amplitudes-csv"):
        labels = [f"{k};{s}" for k in grid.axis_modes for s in range(4)]
        momenta = np.repeat(grid.axis_momenta, 4)
        frames["amplitudes-csv"] = amplitudes_frame(
            (i, labels, momenta, spinor_to_momentum(st)) for i, st in enumerate(states)
        )
    if cfg.wants("states-csv"):
        frames["states-csv"] = states_frame(
            (i, st.energy, grid.axis_points[:, None], st.values) for i, st in enumerate(states)
        )
    return frames


# ----------------------------------------------------------------------
# ✅ 5. Full pipelines
# ----------------------------------------------------------------------
def run_schrodinger_pipeline(cfg: RunConfig, command: str = "solve", states=None) -> PipelineResult:
    """
    Full pipeline:
    1. Build the potential on its grid
    2. Solve (or take stored states)
    3. Averaged relation + pointwise residual per state
    4. Artifact frames
    """
    start = time.perf_counter()
    pot = build_potential(cfg)
    if states is None:
        states = solve_eigen(pot, cfg.mass, cfg.count).states
    solved = time.perf_counter()

    report = Report(command, cfg.problem)
    for i, psi in enumerate(states):
        report.add_state(schrodinger_record(i, psi, pot, cfg.mass))
    _gram_check(report, states)
    checked = time.perf_counter()

    report.metadata = run_metadata(cfg, {"solve": solved - start, "checks": checked - solved})
    return PipelineResult(report, wavefunction_frames(cfg, states))


def run_hydrogen_pipeline(cfg: RunConfig, command: str = "solve", states=None) -> PipelineResult:
    start = time.perf_counter()
    n_grid, r_max, charge = hydrogen_settings(cfg)
    if states is None:
        states = solve_hydrogen_radial(n_grid, r_max, cfg.count, cfg.mass, charge).states
    solved = time.perf_counter()

    report = Report(command, cfg.problem)
    for i, state in enumerate(states):
        report.add_state(hydrogen_record(i, state, cfg.mass, charge))
    _gram_check(report, states, states[0].grid.spacing)
    frames = radial_frames(cfg, states)
    if cfg.wants("momdist-csv"):
        frames.update(_momentum_checks(report, states[0], MOMDIST_TOL))
    checked = time.perf_counter()

    report.metadata = run_metadata(cfg, {"solve": solved - start, "checks": checked - solved})
    return PipelineResult(report, frames)


def run_dirac_pipeline(cfg: RunConfig, command: str = "solve", states=None) -> PipelineResult:
    start = time.perf_counter()
    pot = build_em_potential(cfg)
    if states is None:
        states = solve_dirac(pot, cfg.mass, cfg.c, cfg.count).states
    solved = time.perf_counter()

    report = Report(command, cfg.problem)
    for i, st in enumerate(states):
        report.add_state(dirac_record(i, st, pot, cfg.mass, cfg.c))
    _gram_check(report, states)
    checked = time.perf_counter()

    report.metadata = run_metadata(cfg, {"solve": solved - start, "checks": checked - solved})
    return PipelineResult(report, spinor_frames(cfg, states))


PIPELINES = {
    "schrodinger": run_schrodinger_pipeline,
    "hydrogen-radial": run_hydrogen_pipeline,
    "dirac": run_dirac_pipeline,
}


def run_solve_pipeline(cfg: RunConfig) -> PipelineResult:
    return PIPELINES[cfg.problem](cfg, "solve")


def load_stored_states(cfg: RunConfig, path: str) -> list:
    """Rebuild states from a states.csv artifact on the configured grid."""
    if cfg.problem == "hydrogen-radial":
        n_grid, r_max, _ = hydrogen_settings(cfg)
        grid = make_radial_grid(n_grid, r_max)
        stored = read_states_csv(path, grid.modes)
        return [RadialState(grid, s.values.real, s.energy) for s in stored]
    if cfg.problem == "dirac":
        grid = build_em_potential(cfg).grid
        stored = read_states_csv(path, grid.n, components=4)
        return [SpinorField(grid, s.values, s.energy) for s in stored]
    grid = build_potential(cfg).grid
    stored = read_states_csv(path, grid.size)
    return [WaveFunction(grid, s.values, energy=s.energy) for s in stored]


def run_verify_pipeline(cfg: RunConfig) -> PipelineResult:
    states = load_stored_states(cfg, cfg.states) if cfg.states else None
    return PIPELINES[cfg.problem](cfg, "verify", states)


def _momentum_checks(report: Report, psi0: RadialState, tolerance: float) -> dict:
    dist = hydrogen_momentum_distribution(psi0)
    report.add_check("momdist max rel error (p <= 5)", dist.max_rel_error(5.0), tolerance)
    report.add_check("momdist normalization", abs(dist.normalization_check - 1.0), MOMDIST_NORM_TOL)
    return {"momdist-csv": momdist_frame(dist)}


def run_momentum_pipeline(cfg: RunConfig) -> PipelineResult:
    """Hydrogen 1s momentum distribution against the closed form."""
    if cfg.problem != "hydrogen-radial":
        raise ConfigError("problem", f"momdist needs hydrogen-radial, got {cfg.problem!r}")
    if cfg.mass != 1.0 or cfg.charge != -1.0:
        raise ConfigError("charge", "momdist compares against the m=1, q=-1 closed form")
    start = time.perf_counter()
    n_grid, r_max, charge = hydrogen_settings(cfg)
    report = Report("momdist", cfg.problem)
    if cfg.analytic:
        psi0 = analytic_ground_state(n_grid, r_max)
        tolerance = MOMDIST_ANALYTIC_TOL
    else:
        psi0 = solve_hydrogen_radial(n_grid, r_max, 1, cfg.mass, charge).states[0]
        report.add_state(hydrogen_record(0, psi0, cfg.mass, charge))
        tolerance = MOMDIST_TOL
    frames = _momentum_checks(report, psi0, tolerance)
    closed = closed_form_energy_relation()
    report.add_check("closed-form energy relation", closed.relation_residual, relation_tolerance(closed.total_avg))
    report.metadata = run_metadata(cfg, {"momdist": time.perf_counter() - start})
    return PipelineResult(report, frames)


# ----------------------------------------------------------------------
# ✅ 6. Demo suite
# ----------------------------------------------------------------------
def _demo_box(report: Report) -> None:
    width = 1.0
    pot = make_potential(make_grid(1, 512, 2.0 * width), "box", width=width)
    for n, psi in enumerate(solve_eigen(pot, 1.0, 3).states, start=1):
        exact = (n * np.pi / width) ** 2 / 2.0
        report.add_check(f"box n={n} energy rel error", abs(psi.energy - exact) / exact, 5e-3)
        pair = two_mode_weight(box_amplitudes(psi, width), n * np.pi / width)
        report.add_check(f"box n={n} two-mode weight", pair.fraction, 0.99, passed=pair.fraction >= 0.99)
        report.add_check(f"box n={n} two-mode imbalance", pair.imbalance, 0.01)


def _demo_oscillator(report: Report) -> list:
    pot = make_potential(make_grid(1, 128, 20.0), "harmonic", omega=1.0)
    states = solve_eigen(pot, 1.0, 10).states
    errors = [abs(psi.energy - (n + 0.5)) / (n + 0.5) for n, psi in enumerate(states)]
    report.add_check("oscillator max rel error n=0..9", max(errors), 1e-8)
    worst = max(energy_breakdown(psi, pot).relation_residual / relation_tolerance(psi.energy) for psi in states)
    report.add_check("oscillator averaged relation (x tolerance)", worst, 1.0)

    mixed = mix_states(states[0], states[1])
    contrast = averaged_vs_pointwise(mixed, pot)
    gap = abs(states[1].energy - states[0].energy)
    report.add_check("mixed state averaged residual", abs(contrast.averaged_residual), 1e-10)
    report.add_check(
        "mixed state pointwise l2 / gap", contrast.pointwise_l2 / gap, 0.1, passed=contrast.pointwise_l2 > 0.1 * gap
    )
    return states


def _demo_hydrogen(report: Report) -> dict:
    psi0 = solve_hydrogen_radial().states[0]
    report.add_check("hydrogen E0 rel error", abs(psi0.energy + 0.5) / 0.5, 0.01)
    breakdown = radial_energy_breakdown(psi0)
    report.add_check("hydrogen averaged relation", breakdown.relation_residual, relation_tolerance(psi0.energy))
    return _momentum_checks(report, psi0, MOMDIST_TOL)


def _demo_dirac(report: Report, rng: np.random.Generator) -> None:
    gammas = make_gammas()
    worst = max(
        float(np.max(np.abs(gammas.anticommutator(mu, nu) - 2 * gammas.metric(mu, nu) * np.eye(4))))
        for mu in range(4) for nu in range(mu, 4)
    )
    report.add_check("gamma anticommutators", worst, 1e-15)
    draws = [
        squaring_identity_check(
            rng.uniform(-20, 20, 3), rng.uniform(-3e4, 3e4), rng.uniform(-10, 10), rng.uniform(-100, 100, 3),
        ).deviation
        for _ in range(100)
    ]
    report.add_check("squaring identity, 100 random draws", max(draws), 1e-10)

    free = make_em_potential(make_grid(1, 64, 40.0), "dirac-free")
    rest = C_LIGHT**2
    spectrum = dirac_spectrum(free)
    exact = free_spectrum(free.grid)
    report.add_check("free Dirac dispersion max rel error", float(np.max(np.abs(spectrum - exact) / np.abs(exact))), 1e-10)
    report.add_check("free Dirac E -> -E pairing (/mc^2)", paired_spectrum_error(spectrum) / rest, 1e-10)
    for i, st in enumerate(solve_dirac(free, count=4).states):
        report.add_check(f"free Dirac state {i} theta l2 (/mc^2)", theta_residual(st, free).pointwise_l2 / rest, 1e-10)

    well = make_em_potential(make_grid(1, 128, 40.0), "dirac-well", depth=0.5, width=2.0)
    binding = float(solve_dirac(well).binding_energies[0])
    schrodinger = -float(solve_eigen(nonrelativistic_potential(well)).energies[0])
    report.add_check("non-relativistic limit rel diff", abs(binding - schrodinger) / schrodinger, 1e-4)


def run_demo_pipeline(cfg: RunConfig) -> PipelineResult:
    """Box, oscillator, hydrogen and Dirac acceptance checks in one table."""
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    report = Report("demo", "suite")

    _demo_box(report)
    states = _demo_oscillator(report)
    frames = _demo_hydrogen(report)
    _demo_dirac(report, rng)

    labels, momenta = _mode_labels(states[0].grid)
    frames["amplitudes-csv"] = amplitudes_frame(
        (i, labels, momenta, forward_transform(psi).values) for i, psi in enumerate(states[:3])
    )
    frames["demo-checks"] = report.checks_frame()
    report.metadata = run_metadata(cfg, {"demo": time.perf_counter() - start})
    return PipelineResult(report, frames)
