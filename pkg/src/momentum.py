# momentum.py
"""
Plane-wave amplitudes of solved eigenfunctions and the hydrogen 1s momentum
distribution.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy import integrate

from basis import (
    SpectralAmplitudes,
    WaveFunction,
    forward_transform,
    normalize,
)
from errors import CheckFailure, GridError, NormalizationError
from schrodinger import HYDROGEN_ENERGY_TOL, RadialState
from verify import EnergyBreakdown

logger = logging.getLogger(__name__)

P_MIN = 0.01
P_MAX = 20.0
P_POINTS = 400
PARSEVAL_TOL = 1e-10


@dataclass(frozen=True)
class MomentumDistribution:
    """|a(p)|^2 curve; for 3D s-states the radial density 4 pi p^2 |a0(p)|^2."""

    momenta: np.ndarray = field(repr=False)
    amplitude: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    closed_form: Optional[np.ndarray] = field(default=None, repr=False)
    normalization_check: float = float("nan")

    @property
    def rel_error(self) -> Optional[np.ndarray]:
        if self.closed_form is None:
            return None
        return np.abs(self.amplitude - self.closed_form) / np.abs(self.closed_form)

    def max_rel_error(self, p_max: float = 5.0) -> float:
        mask = self.momenta <= p_max
        return float(np.max(self.rel_error[mask]))


# -----------------------------
# Amplitudes on the periodic grid
# -----------------------------
def extract_amplitudes(state: WaveFunction) -> SpectralAmplitudes:
    """a(p_k) of a normalized state, i.e. the superposition reversed."""
    if not state.is_normalized:
        raise NormalizationError(f"amplitude extraction needs a normalized state (norm={state.norm:.3e})")
    amplitudes = forward_transform(state)
    if abs(amplitudes.total_weight - 1.0) > PARSEVAL_TOL:
        raise NormalizationError(f"sum |a|^2 = {amplitudes.total_weight:.12f} after transform")
    return amplitudes


def box_amplitudes(state: WaveFunction, width: float) -> SpectralAmplitudes:
    """
    Amplitudes of a box eigenstate in the box's own quantization cell.

    The part of the state inside |x| < width/2 is continued as its odd image
    across the walls, giving a cell of length 2*width in which a standing
    wave sin(n pi (x + width/2) / width) is exactly two plane waves at
    +-n pi / width. The grid must span 2*width.
    """
    grid = state.grid
    if grid.dim != 1:
        raise GridError("box amplitudes are defined on 1D grids")
    if abs(grid.extent - 2.0 * width) > 1e-12 * grid.extent:
        raise GridError(f"box width {width} must be half the cell extent {grid.extent}")
    n, quarter = grid.n, grid.n // 4
    j = np.arange(n)
    source = j.copy()
    sign = np.ones(n)
    right, left = j > 3 * quarter, j < quarter
    source[right] = 3 * n // 2 - j[right]
    source[left] = n // 2 - j[left]
    sign[right | left] = -1.0
    sign[(j == quarter) | (j == 3 * quarter)] = 0.0
    image = WaveFunction(grid, sign * state.values[source], energy=state.energy)
    return extract_amplitudes(normalize(image))


class TwoModeWeight(NamedTuple):
    fraction: float
    plus: float
    minus: float

    @property
    def imbalance(self) -> float:
        """Relative difference of the two magnitudes."""
        return abs(self.plus - self.minus) / max(self.plus, self.minus)


def two_mode_weight(amplitudes: SpectralAmplitudes, momentum: float) -> TwoModeWeight:
    """Share of sum |a|^2 in the two lattice modes nearest +-momentum."""
    if amplitudes.grid.dim != 1:
        raise GridError("two-mode analysis is defined on 1D grids")
    p = amplitudes.grid.axis_momenta
    i_plus = int(np.argmin(np.abs(p - momentum)))
    i_minus = int(np.argmin(np.abs(p + momentum)))
    w = amplitudes.weights
    picked = w[i_plus] + (w[i_minus] if i_minus != i_plus else 0.0)
    mags = np.abs(amplitudes.values)
    return TwoModeWeight(float(picked / w.sum()), float(mags[i_plus]), float(mags[i_minus]))


def parity_deviation(amplitudes: SpectralAmplitudes) -> tuple[int, float]:
    """Best parity (+1 even, -1 odd) and max |a(p) - parity*a(-p)| over paired modes."""
    if amplitudes.grid.dim != 1:
        raise GridError("parity analysis is defined on 1D grids")
    a = amplitudes.values
    n = amplitudes.grid.n
    k = np.arange(0, n // 2)
    plus, minus = a[k], a[(-k) % n]
    even = float(np.max(np.abs(plus - minus)))
    odd = float(np.max(np.abs(plus + minus)))
    return (1, even) if even <= odd else (-1, odd)


# -----------------------------
# Hydrogen 1s
# -----------------------------
def hydrogen_a0_closed_form(p, r0: float = 1.0):
    """a0(p) = (1/pi) (2 r0)^(3/2) / (1 + r0^2 p^2)^2, atomic units."""
    p_arr = np.asarray(p, dtype=np.float64)
    if r0 <= 0:
        raise ValueError(f"r0 must be positive, got {r0}")
    if np.any(p_arr < 0):
        raise ValueError("momentum magnitude must be non-negative")
    value = (2.0 * r0) ** 1.5 / np.pi / (1.0 + (r0 * p_arr) ** 2) ** 2
    return float(value) if value.ndim == 0 else value


def closed_form_density(p, r0: float = 1.0):
    return 4.0 * np.pi * np.asarray(p) ** 2 * hydrogen_a0_closed_form(p, r0) ** 2


def spherical_transform(state: RadialState, p) -> np.ndarray:
    """
    a0(p) = 1/(sqrt(2) pi p) * int_0^R u(r) sin(p r) dr.

    The integral is taken exactly for the sine-mode expansion of u, mode by
    mode; p = 0 uses the limit int u(r) r dr.
    """
    grid = state.grid
    p = np.atleast_1d(np.asarray(p, dtype=np.float64))
    R, k = grid.r_max, grid.wavenumbers
    weights = state.coefficients * np.sqrt(2.0 / R)
    scaled = R / np.pi
    kp_minus = np.sinc(np.subtract.outer(p, k) * -scaled)
    kp_plus = np.sinc(np.add.outer(p, k) * scaled)
    sine_integrals = 0.5 * R * (kp_minus - kp_plus)

    out = np.empty_like(p)
    nonzero = p > 0
    out[nonzero] = sine_integrals[nonzero] @ weights / p[nonzero]
    if np.any(~nonzero):
        signs = np.where(np.arange(1, grid.n) % 2 == 1, 1.0, -1.0)
        out[~nonzero] = np.sum(weights * signs * R / k)
    return out / (np.sqrt(2.0) * np.pi)


def _radial_normalization(p: np.ndarray, density: np.ndarray) -> float:
    """int 4 pi p^2 |a0|^2 dp: Simpson in log p, closed-form tails outside the grid."""
    body = integrate.simpson(density * p, x=np.log(p))
    head = integrate.quad(closed_form_density, 0.0, p[0])[0]
    tail = integrate.quad(closed_form_density, p[-1], np.inf)[0]
    return float(body + head + tail)


def hydrogen_momentum_distribution(
    psi0: RadialState, p: Optional[np.ndarray] = None, r0: float = 1.0
) -> MomentumDistribution:
    """Momentum density of an s-wave ground state next to the closed form."""
    if psi0.energy is None:
        raise NormalizationError("ground state carries no energy tag")
    expected = -0.5 / r0
    if abs(psi0.energy - expected) > HYDROGEN_ENERGY_TOL * abs(expected):
        raise CheckFailure(
            f"state energy {psi0.energy:.6f} is not the 1s level {expected:.6f}; "
            "momentum distribution needs the ground state"
        )
    p = np.geomspace(P_MIN, P_MAX, P_POINTS) if p is None else np.asarray(p, dtype=np.float64)
    amplitude = spherical_transform(psi0, p)
    density = 4.0 * np.pi * p**2 * amplitude**2
    return MomentumDistribution(
        momenta=p,
        amplitude=amplitude,
        density=density,
        closed_form=hydrogen_a0_closed_form(p, r0),
        normalization_check=_radial_normalization(p, density),
    )


def closed_form_energy_relation(r0: float = 1.0) -> EnergyBreakdown:
    """
    Averaged energy relation evaluated on the closed-form 1s amplitudes:
    kinetic from int |a0|^2 p^2/2 d^3p, potential <-1/r> from psi0(r).
    """
    kinetic = integrate.quad(lambda q: closed_form_density(q, r0) * q**2 / 2.0, 0.0, np.inf)[0]
    potential = integrate.quad(lambda r: -4.0 * r * np.exp(-2.0 * r / r0) / r0**3, 0.0, np.inf)[0]
    total = -0.5 / r0
    return EnergyBreakdown(kinetic, potential, total, abs(total - kinetic - potential))


def radial_dominant_modes(state: RadialState, top: int = 5) -> list[dict]:
    """Largest sine-mode weights c_n^2 with their wavenumbers n pi / R."""
    w = state.coefficients**2
    order = np.argsort(-w, kind="stable")[:top]
    k = state.grid.wavenumbers
    return [{"mode": [int(i) + 1], "momentum": [float(k[i])], "weight": float(w[i])} for i in order]
