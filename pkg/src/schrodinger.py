# schrodinger.py
"""
Non-relativistic Hamiltonian in the plane-wave basis and its eigenpairs.

The kinetic term is diagonal, p_k^2 / 2m; the potential couples modes k and k'
through its own transform V~(p_k - p_k'). Each returned eigenfunction is the
specific plane-wave superposition the dense eigensolve selects.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np
import scipy.fft as sfft
from scipy.linalg import LinAlgError, eigh
from scipy.special import sici

from basis import (
    NORM_TOL,
    SpectralAmplitudes,
    UniformGrid,
    WaveFunction,
    inverse_transform,
)
from errors import GridError, PotentialError, SolverError

logger = logging.getLogger(__name__)

MAX_DENSE_SIZE = 4096
BOX_WALL_HEIGHT = 1e5
HYDROGEN_ENERGY_TOL = 0.01


# -----------------------------
# Potentials
# -----------------------------
@dataclass(frozen=True)
class PotentialField:
    grid: UniformGrid
    values: np.ndarray = field(repr=False)
    label: str = "custom"

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64)
        if arr.size != self.grid.size:
            raise GridError(f"expected {self.grid.size} potential values, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise PotentialError(f"potential {self.label!r} has non-finite values")
        arr = arr.reshape(self.grid.shape)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)


def _box(grid: UniformGrid, width: Optional[float] = None, height: float = BOX_WALL_HEIGHT):
    width = 0.5 * grid.extent if width is None else float(width)
    if not 0.0 < width < grid.extent:
        raise PotentialError(f"box width must lie in (0, {grid.extent}), got {width}")
    inside = np.logical_and.reduce([np.abs(x) < 0.5 * width for x in grid.coordinates])
    return np.where(inside, 0.0, float(height)), f"box(width={width:g},height={height:g})"


def _harmonic(grid: UniformGrid, omega: float = 1.0, mass: float = 1.0):
    return 0.5 * mass * omega**2 * grid.radius**2, f"harmonic(omega={omega:g})"


def _soft_coulomb(grid: UniformGrid, eps: float = 1.0, charge: float = 1.0):
    if eps <= 0:
        raise PotentialError(f"soft-coulomb eps must be positive, got {eps}")
    return -charge / np.sqrt(grid.radius**2 + eps**2), f"soft-coulomb(eps={eps:g})"


def _constant(grid: UniformGrid, value: float = 0.0):
    return np.full(grid.shape, float(value)), f"constant({value:g})"


POTENTIAL_PRESETS = {
    "free": lambda grid: (np.zeros(grid.shape), "free"),
    "constant": _constant,
    "box": _box,
    "harmonic": _harmonic,
    "soft-coulomb": _soft_coulomb,
}


def make_potential(grid: UniformGrid, name: str, **params) -> PotentialField:
    """Build a named preset, e.g. ``make_potential(grid, "harmonic", omega=1)``."""
    try:
        builder = POTENTIAL_PRESETS[name]
    except KeyError:
        raise PotentialError(
            f"unknown potential {name!r}; choose from {sorted(POTENTIAL_PRESETS)}"
        ) from None
    try:
        values, label = builder(grid, **params)
    except TypeError as exc:
        raise PotentialError(f"bad parameters for {name!r}: {exc}") from exc
    return PotentialField(grid, values, label)


# -----------------------------
# Plane-wave Hamiltonian
# -----------------------------
def potential_coupling(pot: PotentialField) -> np.ndarray:
    """Dense matrix V~(p_k - p_k') with lattice differences wrapped mod N."""
    grid = pot.grid
    vq = (sfft.fftn(sfft.ifftshift(pot.values)) / grid.size).reshape(-1)
    slots = np.indices(grid.shape, dtype=np.int32).reshape(grid.dim, -1)
    flat = np.zeros((grid.size, grid.size), dtype=np.int32)
    for axis in range(grid.dim):
        flat *= grid.n
        flat += np.subtract.outer(slots[axis], slots[axis]) % grid.n
    return vq[flat]


def assemble_hamiltonian(pot: PotentialField, mass: float = 1.0) -> np.ndarray:
    """H[k,k'] = p_k^2/2m delta_kk' + V~(p_k - p_k'), Hermitian."""
    if mass <= 0:
        raise ValueError(f"mass must be positive, got {mass}")
    grid = pot.grid
    if grid.size > MAX_DENSE_SIZE:
        raise GridError(
            f"grid has {grid.size} points; dense assembly is limited to {MAX_DENSE_SIZE}"
        )
    h = potential_coupling(pot)
    h[np.diag_indices(grid.size)] += grid.momentum_squared.reshape(-1) / (2.0 * mass)
    return 0.5 * (h + h.conj().T)


@dataclass(frozen=True)
class RadialGrid:
    """Radial interval (0, r_max] cut into ``n`` steps; sine modes n = 1..n-1."""

    n: int
    r_max: float

    @property
    def spacing(self) -> float:
        return self.r_max / self.n

    @property
    def modes(self) -> int:
        return self.n - 1

    @cached_property
    def points(self) -> np.ndarray:
        return np.arange(1, self.n) * self.spacing

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        return np.arange(1, self.n) * np.pi / self.r_max


@dataclass(frozen=True)
class RadialState:
    """Reduced radial function u(r) = r psi(r) sampled on a RadialGrid."""

    grid: RadialGrid
    values: np.ndarray = field(repr=False)
    energy: Optional[float] = None

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).reshape(-1)
        if arr.size != self.grid.modes:
            raise GridError(f"expected {self.grid.modes} radial samples, got {arr.size}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def coefficients(self) -> np.ndarray:
        """Amplitudes on the orthonormal modes sqrt(2/R) sin(k_n r)."""
        return np.sqrt(self.grid.spacing) * sfft.dst(self.values, type=1, norm="ortho")

    @property
    def norm(self) -> float:
        return float(self.grid.spacing * np.sum(self.values**2))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm - 1.0) <= NORM_TOL

    @classmethod
    def from_coefficients(cls, grid: RadialGrid, coefficients, energy=None) -> "RadialState":
        u = sfft.idst(np.asarray(coefficients, dtype=np.float64), type=1, norm="ortho")
        return cls(grid, u / np.sqrt(grid.spacing), energy)


@dataclass(frozen=True)
class EigenSolution:
    grid: Union[UniformGrid, RadialGrid]
    count: int
    energies: np.ndarray
    states: Sequence[Union[WaveFunction, RadialState]]
    mass: float
    potential: Optional[PotentialField] = None
    label: str = ""

    def gram(self) -> np.ndarray:
        mat = np.array([s.values.reshape(-1) for s in self.states])
        weight = self.grid.spacing if isinstance(self.grid, RadialGrid) else 1.0
        return weight * (mat.conj() @ mat.T)


def fix_phase(values: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude component is real and positive."""
    flat = values.reshape(-1)
    pivot = flat[np.argmax(np.abs(flat))]
    return values * (np.abs(pivot) / pivot)


def eigh_window(h: np.ndarray, count: int, context: str, first: int = 0):
    """Eigenpairs ``first .. first+count-1`` in ascending order."""
    size = h.shape[0]
    if not 1 <= count <= size - first:
        raise ValueError(f"count must lie in [1, {size - first}], got {count}")
    try:
        energies, vectors = eigh(h, subset_by_index=[first, first + count - 1])
    except (LinAlgError, ValueError) as exc:
        raise SolverError(f"dense eigensolve failed ({context}): {exc}") from exc
    if not np.all(np.isfinite(energies)):
        raise SolverError(f"eigensolve returned non-finite energies ({context})")
    return energies, vectors


def solve_eigen(pot: PotentialField, mass: float = 1.0, count: int = 1) -> EigenSolution:
    """Lowest ``count`` eigenpairs, states in position space and normalized."""
    grid = pot.grid
    h = assemble_hamiltonian(pot, mass)
    context = f"{pot.label}, n={grid.n}, extent={grid.extent:g}, dim={grid.dim}"
    energies, vectors = eigh_window(h, count, context)
    logger.debug("solved %s: lowest energies %s", context, energies[:4])

    states = []
    for energy, vec in zip(energies, vectors.T):
        psi = inverse_transform(SpectralAmplitudes(grid, vec, energy))
        states.append(WaveFunction(grid, fix_phase(psi.values), energy=energy))
    return EigenSolution(grid, count, energies, tuple(states), mass, pot, pot.label)


# -----------------------------
# Hydrogen, s-wave radial reduction
# -----------------------------
def coulomb_coupling(grid: RadialGrid, charge: float = 1.0) -> np.ndarray:
    """Exact <n| -Z/r |m> between the sine modes, via the cosine integral."""
    idx = np.arange(1, grid.modes + 1)
    x = np.arange(1, 2 * grid.modes + 1) * np.pi
    cin = np.zeros(2 * grid.modes + 1)
    cin[1:] = np.euler_gamma + np.log(x) - sici(x)[1]
    plus = np.add.outer(idx, idx)
    minus = np.abs(np.subtract.outer(idx, idx))
    return -(charge / grid.r_max) * (cin[plus] - cin[minus])


def assemble_radial_hamiltonian(
    grid: RadialGrid, mass: float = 1.0, charge: float = 1.0
) -> np.ndarray:
    h = coulomb_coupling(grid, charge)
    h[np.diag_indices(grid.modes)] += grid.wavenumbers**2 / (2.0 * mass)
    return 0.5 * (h + h.T)


def make_radial_grid(n_grid: int, r_max: float) -> RadialGrid:
    if isinstance(n_grid, bool) or not isinstance(n_grid, (int, np.integer)) or n_grid < 512:
        raise GridError(f"radial n_grid must be an integer >= 512, got {n_grid!r}")
    if not np.isfinite(r_max) or r_max < 20.0:
        raise GridError(f"radial r_max must be >= 20 bohr, got {r_max}")
    if n_grid - 1 > MAX_DENSE_SIZE:
        raise GridError(f"radial n_grid {n_grid} exceeds the dense limit {MAX_DENSE_SIZE + 1}")
    return RadialGrid(int(n_grid), float(r_max))


def solve_hydrogen_radial(
    n_grid: int = 2048,
    r_max: float = 40.0,
    count: int = 1,
    mass: float = 1.0,
    charge: float = 1.0,
) -> EigenSolution:
    """l = 0 states of -u''/2m - Z u/r = E u with u(0) = u(r_max) = 0."""
    grid = make_radial_grid(n_grid, r_max)
    h = assemble_radial_hamiltonian(grid, mass, charge)
    context = f"coulomb-radial, n_grid={grid.n}, r_max={grid.r_max:g}, dr={grid.spacing:.3e}"
    energies, vectors = eigh_window(h, count, context)

    expected = -0.5 * mass * charge**2
    if abs(energies[0] - expected) > HYDROGEN_ENERGY_TOL * abs(expected):
        raise SolverError(
            f"radial ground state did not converge ({context}): "
            f"E0={energies[0]:.8f}, Bohr level {expected:.8f}"
        )

    states = tuple(
        RadialState.from_coefficients(grid, fix_phase(vec), energy)
        for energy, vec in zip(energies, vectors.T)
    )
    return EigenSolution(grid, count, energies, states, mass, None, "coulomb-radial")


def analytic_ground_state(n_grid: int = 4096, r_max: float = 40.0) -> RadialState:
    """Exact 1s function u(r) = 2 r exp(-r) sampled on a radial grid."""
    grid = make_radial_grid(n_grid, r_max)
    r = grid.points
    u = 2.0 * r * np.exp(-r)
    # trapezoid sum differs from 1 at O(dr^4); rescale so is_normalized holds
    u /= np.sqrt(grid.spacing * np.sum(u**2))
    return RadialState(grid, u, energy=-0.5)
