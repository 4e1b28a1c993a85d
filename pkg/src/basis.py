# basis.py
"""
Periodic grids, the plane-wave basis and the unitary transforms between the
position and momentum representations.

Hartree atomic units throughout (hbar = m_e = e = 1). A state on an N-point
grid is the superposition

    psi(x_j) = sum_k a(p_k) exp(i p_k x_j) / sqrt(N^dim)

with the symmetric 1/sqrt(N^dim) factor on both transforms, so
sum_k |a(p_k)|^2 equals the position-space norm sum_j |psi(x_j)|^2 exactly.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Mapping, Optional, Sequence, Union

import numpy as np
import scipy.fft as sfft

from errors import GridError, NormalizationError, RepresentationError

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
ALIASING_TOL = 1e-8
SUPPORTED_DIMS = (1, 3)


# -----------------------------
# Grid
# -----------------------------
@dataclass(frozen=True)
class UniformGrid:
    """Periodic cube of side ``extent`` sampled with ``n`` points per axis."""

    dim: int
    n: int
    extent: float

    @property
    def spacing(self) -> float:
        return self.extent / self.n

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        return self.n**self.dim

    @property
    def momentum_step(self) -> float:
        return 2.0 * np.pi / self.extent

    @cached_property
    def axis_points(self) -> np.ndarray:
        # origin sits on index n/2, so x -> -x maps the grid onto itself
        return -0.5 * self.extent + np.arange(self.n) * self.spacing

    @cached_property
    def axis_momenta(self) -> np.ndarray:
        # FFT order: 0, 1, ..., n/2-1, -n/2, ..., -1 (times 2*pi/L)
        return 2.0 * np.pi * sfft.fftfreq(self.n, d=self.spacing)

    @cached_property
    def axis_modes(self) -> np.ndarray:
        """Integer lattice index k of each FFT-ordered momentum slot."""
        return np.rint(sfft.fftfreq(self.n) * self.n).astype(int)

    @cached_property
    def coordinates(self) -> tuple[np.ndarray, ...]:
        axes = [self.axis_points] * self.dim
        return tuple(np.meshgrid(*axes, indexing="ij"))

    @cached_property
    def momenta(self) -> tuple[np.ndarray, ...]:
        axes = [self.axis_momenta] * self.dim
        return tuple(np.meshgrid(*axes, indexing="ij"))

    @cached_property
    def momentum_squared(self) -> np.ndarray:
        return sum(p**2 for p in self.momenta)

    @cached_property
    def radius(self) -> np.ndarray:
        return np.sqrt(sum(x**2 for x in self.coordinates))

    @cached_property
    def nyquist_mask(self) -> np.ndarray:
        """True on modes with a component at the unpaired index k = -N/2."""
        unpaired = np.arange(self.n) == self.n // 2
        axes = [unpaired] * self.dim
        grids = np.meshgrid(*axes, indexing="ij")
        return np.logical_or.reduce(grids)

    def mode_slot(self, mode: Union[int, Sequence[int]]) -> tuple[int, ...]:
        """Array index holding lattice mode ``mode`` (one integer per axis)."""
        ks = (mode,) if np.isscalar(mode) else tuple(mode)
        if len(ks) != self.dim:
            raise GridError(f"mode {mode!r} needs {self.dim} components")
        for k in ks:
            if not -self.n // 2 <= k < self.n // 2:
                raise GridError(f"mode {k} outside [-{self.n // 2}, {self.n // 2})")
        return tuple(int(k) % self.n for k in ks)


def make_grid(dim: int, n: int, extent: float) -> UniformGrid:
    """Validate and build a periodic grid with its dual momentum lattice."""
    if isinstance(dim, bool) or dim not in SUPPORTED_DIMS:
        raise GridError(f"dim must be one of {SUPPORTED_DIMS}, got {dim!r}")
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise GridError(f"n must be an integer, got {n!r}")
    if n < 4 or n & (n - 1):
        raise GridError(f"n must be a power of two >= 4, got {n}")
    extent = float(extent)
    if not np.isfinite(extent) or extent <= 0.0:
        raise GridError(f"extent must be a positive length, got {extent}")
    return UniformGrid(dim=int(dim), n=int(n), extent=extent)


# -----------------------------
# States
# -----------------------------
class Representation(enum.Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


def _frozen_values(grid: UniformGrid, values) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.size != grid.size:
        raise GridError(f"expected {grid.size} values on the grid, got {arr.size}")
    arr = arr.reshape(grid.shape)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class WaveFunction:
    """Complex field on a grid; ``energy`` tags a stationary state E_n."""

    grid: UniformGrid
    values: np.ndarray = field(repr=False)
    representation: Representation = Representation.POSITION
    energy: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_values(self.grid, self.values))
        if self.energy is not None:
            object.__setattr__(self, "energy", float(self.energy))

    @property
    def norm(self) -> float:
        return float(np.vdot(self.values, self.values).real)

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm - 1.0) <= NORM_TOL

    def with_energy(self, energy: Optional[float]) -> "WaveFunction":
        return replace(self, energy=energy)

    def at_time(self, t: float) -> "WaveFunction":
        """Values at time t, i.e. multiplied by exp(-i E_n t)."""
        if self.energy is None:
            raise NormalizationError("state has no energy tag; time factor undefined")
        return replace(self, values=self.values * np.exp(-1j * self.energy * t))


@dataclass(frozen=True)
class SpectralAmplitudes:
    """Plane-wave amplitudes a(p_k) of one state, stored in FFT order."""

    grid: UniformGrid
    values: np.ndarray = field(repr=False)
    energy: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_values(self.grid, self.values))
        if self.energy is not None:
            object.__setattr__(self, "energy", float(self.energy))

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def at(self, mode: Union[int, Sequence[int]]) -> complex:
        return complex(self.values[self.grid.mode_slot(mode)])

    def as_wavefunction(self) -> WaveFunction:
        return WaveFunction(self.grid, self.values, Representation.MOMENTUM, self.energy)

    def dominant_modes(self, top: int = 5) -> list[dict]:
        """Largest |a|^2 modes, ties resolved by storage order."""
        flat = self.weights.reshape(-1)
        order = np.argsort(-flat, kind="stable")[:top]
        out = []
        for idx in order:
            slot = np.unravel_index(idx, self.grid.shape)
            out.append({
                "mode": [int(self.grid.axis_modes[s]) for s in slot],
                "momentum": [float(self.grid.axis_momenta[s]) for s in slot],
                "weight": float(flat[idx]),
            })
        return out


# -----------------------------
# Transforms
# -----------------------------
def nyquist_weight(amplitudes: SpectralAmplitudes) -> float:
    """Share of sum |a|^2 sitting in the unpaired k = -N/2 modes."""
    total = amplitudes.total_weight
    if total == 0.0:
        return 0.0
    return float(amplitudes.weights[amplitudes.grid.nyquist_mask].sum() / total)


def check_aliasing(amplitudes: SpectralAmplitudes) -> float:
    share = nyquist_weight(amplitudes)
    if share > ALIASING_TOL:
        logger.warning(
            "%.3e of the spectral weight sits in the unpaired k=-N/2 mode "
            "(grid n=%d, extent=%g); refine the grid",
            share, amplitudes.grid.n, amplitudes.grid.extent,
        )
    return share


def forward_transform(psi: WaveFunction) -> SpectralAmplitudes:
    """Position values -> plane-wave amplitudes (inverse superposition)."""
    if psi.representation is not Representation.POSITION:
        raise RepresentationError("forward_transform expects a position-space state")
    a = sfft.fftn(sfft.ifftshift(psi.values), norm="ortho")
    return SpectralAmplitudes(psi.grid, a, psi.energy)


def inverse_transform(amplitudes: SpectralAmplitudes) -> WaveFunction:
    """Plane-wave superposition sum_k a(p_k) exp(i p_k x) on the grid."""
    psi = sfft.fftshift(sfft.ifftn(amplitudes.values, norm="ortho"))
    return WaveFunction(amplitudes.grid, psi, Representation.POSITION, amplitudes.energy)


def inner_product(f: WaveFunction, g: WaveFunction) -> complex:
    """<f, g>, conjugate-linear in f."""
    if f.grid != g.grid:
        raise RepresentationError(f"grid mismatch: {f.grid} vs {g.grid}")
    if f.representation is not g.representation:
        raise RepresentationError(
            f"representation mismatch: {f.representation.value} vs {g.representation.value}"
        )
    return complex(np.vdot(f.values, g.values))


def normalize(psi: WaveFunction) -> WaveFunction:
    norm = psi.norm
    if not np.isfinite(norm) or norm <= 0.0:
        raise NormalizationError(f"cannot normalize a state with norm {norm}")
    return replace(psi, values=psi.values / np.sqrt(norm))


def superpose(
    grid: UniformGrid,
    modes: Mapping[Union[int, tuple[int, ...]], complex],
    energy: Optional[float] = None,
) -> WaveFunction:
    """Position-space state from explicit {lattice mode: amplitude} terms."""
    a = np.zeros(grid.shape, dtype=np.complex128)
    for mode, amp in modes.items():
        a[grid.mode_slot(mode)] += amp
    return inverse_transform(SpectralAmplitudes(grid, a, energy))


def plane_wave(grid: UniformGrid, mode, energy: Optional[float] = None) -> WaveFunction:
    """Normalized single plane wave exp(i p_mode x)."""
    return superpose(grid, {mode if np.isscalar(mode) else tuple(mode): 1.0}, energy)
