# verify.py
"""
Averaged energy relation and pointwise residual checks.

For a stationary state tagged with E_n:

    kinetic_avg   = sum_k |a(p_k)|^2 p_k^2 / 2m      (from the amplitudes)
    potential_avg = sum_j V(x_j) |psi(x_j)|^2          (position integral)
    Phi(x)        = E_n psi - [T psi](x) - V(x) psi(x) (T applied spectrally)

The averaged relation only asks <psi|Phi> = 0; an eigenstate has Phi = 0 at
every grid point.
"""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, replace

import numpy as np
import scipy.fft as sfft

from basis import (
    Representation,
    SpectralAmplitudes,
    WaveFunction,
    forward_transform,
    inverse_transform,
    normalize,
)
from errors import NormalizationError, RepresentationError
from schrodinger import PotentialField, RadialState, assemble_radial_hamiltonian

logger = logging.getLogger(__name__)

RELATION_TOL = 1e-8


@dataclass(frozen=True)
class EnergyBreakdown:
    kinetic_avg: float
    potential_avg: float
    total_avg: float
    relation_residual: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ResidualReport:
    pointwise_max: float
    pointwise_l2: float
    averaged_residual: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ResidualContrast:
    averaged_residual: float
    pointwise_l2: float


def relation_tolerance(energy: float) -> float:
    return RELATION_TOL * max(1.0, abs(energy))


def require_stationary(state, normalized: bool = True) -> None:
    if state.energy is None:
        raise NormalizationError("state carries no energy tag")
    if normalized and not state.is_normalized:
        raise NormalizationError(f"state is not normalized (norm={state.norm:.3e})")


def _require_compatible(state: WaveFunction, pot: PotentialField) -> None:
    if state.representation is not Representation.POSITION:
        raise RepresentationError("verification expects a position-space state")
    if state.grid != pot.grid:
        raise RepresentationError(f"state grid {state.grid} differs from potential grid {pot.grid}")


def _kinetic_apply(state: WaveFunction, mass: float) -> np.ndarray:
    a = forward_transform(state)
    ta = SpectralAmplitudes(state.grid, a.values * state.grid.momentum_squared / (2.0 * mass))
    return inverse_transform(ta).values


# -----------------------------
# Plane-wave grids
# -----------------------------
def energy_breakdown(state: WaveFunction, pot: PotentialField, mass: float = 1.0) -> EnergyBreakdown:
    _require_compatible(state, pot)
    require_stationary(state)
    a = forward_transform(state)
    kinetic = float(np.sum(a.weights * state.grid.momentum_squared) / (2.0 * mass))
    potential = float(np.sum(pot.values * np.abs(state.values) ** 2))
    total = float(state.energy)
    return EnergyBreakdown(kinetic, potential, total, abs(total - kinetic - potential))


def kinetic_position_average(state: WaveFunction, mass: float = 1.0) -> float:
    """<psi|T psi> with T applied in position space."""
    return float(np.vdot(state.values, _kinetic_apply(state, mass)).real)


def pointwise_residual(state: WaveFunction, pot: PotentialField, mass: float = 1.0) -> ResidualReport:
    _require_compatible(state, pot)
    require_stationary(state)
    psi = state.values
    phi = state.energy * psi - _kinetic_apply(state, mass) - pot.values * psi
    return ResidualReport(
        pointwise_max=float(np.max(np.abs(phi))),
        pointwise_l2=float(np.linalg.norm(phi) / np.linalg.norm(psi)),
        averaged_residual=float(np.vdot(psi, phi).real),
    )


def averaged_vs_pointwise(state: WaveFunction, pot: PotentialField, mass: float = 1.0) -> ResidualContrast:
    """The <psi|Phi> average next to the pointwise norm of Phi."""
    report = pointwise_residual(state, pot, mass)
    return ResidualContrast(report.averaged_residual, report.pointwise_l2)


def mix_states(first: WaveFunction, second: WaveFunction) -> WaveFunction:
    """(first + second)/sqrt(2), normalized, tagged with the mean energy."""
    require_stationary(first, normalized=False)
    require_stationary(second, normalized=False)
    if first.grid != second.grid:
        raise RepresentationError("cannot mix states on different grids")
    mixed = replace(first, values=(first.values + second.values) / np.sqrt(2.0))
    return normalize(mixed).with_energy(0.5 * (first.energy + second.energy))


# -----------------------------
# Radial (hydrogen) states
# -----------------------------
def radial_energy_breakdown(state: RadialState, mass: float = 1.0, charge: float = 1.0) -> EnergyBreakdown:
    """Kinetic from sine amplitudes, potential from the exact Coulomb couplings."""
    require_stationary(state)
    grid = state.grid
    c = state.coefficients
    kinetic = float(np.sum(c**2 * grid.wavenumbers**2) / (2.0 * mass))
    h = assemble_radial_hamiltonian(grid, mass, charge)
    h[np.diag_indices(grid.modes)] -= grid.wavenumbers**2 / (2.0 * mass)
    potential = float(c @ h @ c)
    total = float(state.energy)
    return EnergyBreakdown(kinetic, potential, total, abs(total - kinetic - potential))


def radial_pointwise_residual(state: RadialState, mass: float = 1.0, charge: float = 1.0) -> ResidualReport:
    require_stationary(state)
    grid = state.grid
    c = state.coefficients
    r = state.energy * c - assemble_radial_hamiltonian(grid, mass, charge) @ c
    phi = sfft.idst(r, type=1, norm="ortho") / np.sqrt(grid.spacing)
    return ResidualReport(
        pointwise_max=float(np.max(np.abs(phi))),
        pointwise_l2=float(np.linalg.norm(r) / np.linalg.norm(c)),
        averaged_residual=float(c @ r),
    )
