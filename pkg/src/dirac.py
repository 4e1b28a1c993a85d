# dirac.py
"""
Gamma-matrix algebra, free spinors and the minimally coupled Dirac
Hamiltonian on a 1D periodic grid.

The spatial axis is z: momentum p and the vector potential A_par point along
it, so only gamma^3 (alpha_z = gamma^0 gamma^3) enters the kinetic term.
Energies include the rest mass mc^2. Plane-wave/spinor basis index 4k + s.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np
import scipy.fft as sfft

from basis import UniformGrid
from errors import GridError, NormalizationError, PotentialError, SolverError
from schrodinger import (
    EigenSolution,
    PotentialField,
    eigh_window,
    fix_phase,
    potential_coupling,
)
from verify import EnergyBreakdown, ResidualReport, require_stationary

logger = logging.getLogger(__name__)

C_LIGHT = 137.035999084
ELECTRON_CHARGE = -1.0
MAX_DIRAC_POINTS = 1024
SPINOR_NORM_TOL = 1e-10

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


class Branch(str, enum.Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class Spin(str, enum.Enum):
    UP = "up"
    DOWN = "down"


# -----------------------------
# Gamma matrices
# -----------------------------
@dataclass(frozen=True)
class GammaSet:
    """Dirac-representation gammas, metric (+,-,-,-)."""

    gamma0: np.ndarray = field(repr=False)
    gamma1: np.ndarray = field(repr=False)
    gamma2: np.ndarray = field(repr=False)
    gamma3: np.ndarray = field(repr=False)
    metric_signature: tuple[int, int, int, int] = (1, -1, -1, -1)

    def __getitem__(self, mu: int) -> np.ndarray:
        return (self.gamma0, self.gamma1, self.gamma2, self.gamma3)[mu]

    @property
    def spatial(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.gamma1, self.gamma2, self.gamma3

    @property
    def beta(self) -> np.ndarray:
        return self.gamma0

    def alpha(self, i: int) -> np.ndarray:
        """alpha_i = gamma^0 gamma^i, i in 1..3."""
        return self.gamma0 @ self[i]

    def anticommutator(self, mu: int, nu: int) -> np.ndarray:
        return self[mu] @ self[nu] + self[nu] @ self[mu]

    def metric(self, mu: int, nu: int) -> int:
        return self.metric_signature[mu] if mu == nu else 0


def make_gammas() -> GammaSet:
    eye, zero = np.eye(2, dtype=np.complex128), np.zeros((2, 2), dtype=np.complex128)
    gamma0 = np.block([[eye, zero], [zero, -eye]])
    spatial = [np.block([[zero, s], [-s, zero]]) for s in _SIGMA]
    mats = [gamma0, *spatial]
    for m in mats:
        m.flags.writeable = False
    return GammaSet(*mats)


GAMMAS = make_gammas()


# -----------------------------
# Spinors and the linear form
# -----------------------------
@dataclass(frozen=True)
class Spinor4:
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.complex128).reshape(-1)
        if arr.size != 4:
            raise ValueError(f"a spinor has 4 components, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("spinor components must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def norm(self) -> float:
        return float(np.vdot(self.values, self.values).real)

    def adjoint_bar(self, gammas: GammaSet = GAMMAS) -> np.ndarray:
        """u-bar = u^dagger gamma^0."""
        return self.values.conj() @ gammas.gamma0


def _as_vector(p) -> np.ndarray:
    if np.isscalar(p):
        return np.array([0.0, 0.0, float(p)])
    vec = np.asarray(p, dtype=np.float64).reshape(-1)
    if vec.size != 3:
        raise ValueError(f"expected a scalar or a 3-vector, got {vec.size} components")
    return vec


def linear_form(
    p,
    energy: float,
    m: float = 1.0,
    c: float = C_LIGHT,
    A0: float = 0.0,
    A=0.0,
    q: float = ELECTRON_CHARGE,
    mass_sign: int = 1,
    gammas: GammaSet = GAMMAS,
) -> np.ndarray:
    """
    gamma^0 (E - q A0) - gamma . (p - q A / c) c - mass_sign * m c^2.

    Scalars for ``p`` and ``A`` are taken along the z axis.
    """
    kinetic = (_as_vector(p) - q * _as_vector(A) / c) * c
    out = gammas.gamma0 * (energy - q * A0) - mass_sign * m * c**2 * np.eye(4)
    for g, k in zip(gammas.spatial, kinetic):
        out = out - g * k
    return out


class SquaringCheck(NamedTuple):
    deviation: float
    scalar: float


def squaring_identity_check(
    p,
    E: float,
    A0: float = 0.0,
    A=0.0,
    q: float = ELECTRON_CHARGE,
    m: float = 1.0,
    c: float = C_LIGHT,
    gammas: GammaSet = GAMMAS,
) -> SquaringCheck:
    """
    Product of the linear form with its mass-flipped partner against the
    scalar (E - qA0)^2 - (p - qA/c)^2 c^2 - m^2 c^4 times the identity.

    Constant potentials only. The deviation is relative to
    max(1, (E - qA0)^2 + (p - qA/c)^2 c^2 + m^2 c^4).
    """
    minus = linear_form(p, E, m, c, A0, A, q, mass_sign=-1, gammas=gammas)
    plus = linear_form(p, E, m, c, A0, A, q, mass_sign=1, gammas=gammas)
    eps = E - q * A0
    kin2 = float(np.sum(((_as_vector(p) - q * _as_vector(A) / c) * c) ** 2))
    rest2 = (m * c**2) ** 2
    scalar = eps**2 - kin2 - rest2
    dev = float(np.max(np.abs(minus @ plus - scalar * np.eye(4))))
    return SquaringCheck(dev / max(1.0, eps**2 + kin2 + rest2), float(scalar))


def _branch(sign: Union[Branch, str]) -> Branch:
    try:
        return Branch(sign)
    except ValueError:
        raise ValueError(f"branch must be 'positive' or 'negative', got {sign!r}") from None


def _spin(spin: Union[Spin, str]) -> Spin:
    try:
        return Spin(spin)
    except ValueError:
        raise ValueError(f"spin must be 'up' or 'down', got {spin!r}") from None


def free_energy(p, m: float = 1.0, c: float = C_LIGHT):
    return np.sqrt((np.asarray(p) * c) ** 2 + (m * c**2) ** 2)


def free_spinor(
    p: float,
    sign: Union[Branch, str] = Branch.POSITIVE,
    spin: Union[Spin, str] = Spin.UP,
    m: float = 1.0,
    c: float = C_LIGHT,
) -> tuple[Spinor4, float]:
    """Plane-wave spinor u(p, E) with u^dagger u = 1 and E = +-sqrt(p^2c^2 + m^2c^4)."""
    chi = np.array([1.0, 0.0]) if _spin(spin) is Spin.UP else np.array([0.0, 1.0])
    rest = m * c**2
    energy = float(free_energy(p, m, c))
    pc_sigma = _SIGMA[2] * (p * c)
    if _branch(sign) is Branch.POSITIVE:
        u = np.concatenate([chi, pc_sigma @ chi / (energy + rest)])
    else:
        energy = -energy
        u = np.concatenate([pc_sigma @ chi / (energy - rest), chi])
    return Spinor4(u / np.linalg.norm(u)), energy


def spinor_residual(u: Spinor4, p: float, energy: float, m: float = 1.0, c: float = C_LIGHT) -> float:
    """max |[gamma^0 E - gamma^3 p c - m c^2] u| in units of m c^2."""
    return float(np.max(np.abs(linear_form(p, energy, m, c) @ u.values)) / (m * c**2))


def momentum_block(p: float, m: float = 1.0, c: float = C_LIGHT, gammas: GammaSet = GAMMAS) -> np.ndarray:
    """Free 4x4 block c alpha_z p + beta m c^2 of one momentum mode."""
    return c * p * gammas.alpha(3) + m * c**2 * gammas.beta


def free_spectrum(grid: UniformGrid, m: float = 1.0, c: float = C_LIGHT, shift: float = 0.0) -> np.ndarray:
    """Sorted +-sqrt((p_k - shift)^2 c^2 + m^2 c^4), each twice (spin)."""
    e = free_energy(grid.axis_momenta - shift, m, c)
    return np.sort(np.concatenate([e, e, -e, -e]))


# -----------------------------
# Fields on the grid
# -----------------------------
@dataclass(frozen=True)
class SpinorField:
    """Four components per grid point, values shaped (N, 4)."""

    grid: UniformGrid
    values: np.ndarray = field(repr=False)
    energy: Optional[float] = None

    def __post_init__(self):
        if self.grid.dim != 1:
            raise GridError("spinor fields live on 1D grids")
        arr = np.array(self.values, dtype=np.complex128)
        if arr.size != 4 * self.grid.n:
            raise GridError(f"expected {4 * self.grid.n} spinor values, got {arr.size}")
        arr = arr.reshape(self.grid.n, 4)
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)
        if self.energy is not None:
            object.__setattr__(self, "energy", float(self.energy))

    @property
    def norm(self) -> float:
        return float(np.vdot(self.values, self.values).real)

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm - 1.0) <= SPINOR_NORM_TOL

    def spinor_at(self, j: int) -> Spinor4:
        return Spinor4(self.values[j])

    def with_energy(self, energy: Optional[float]) -> "SpinorField":
        return SpinorField(self.grid, self.values, energy)


def spinor_to_momentum(state: SpinorField) -> np.ndarray:
    """Amplitudes a_s(p_k), shape (N, 4), FFT order along k."""
    return sfft.fft(sfft.ifftshift(state.values, axes=0), axis=0, norm="ortho")


def spinor_from_momentum(grid: UniformGrid, amplitudes: np.ndarray, energy=None) -> SpinorField:
    psi = sfft.fftshift(sfft.ifft(amplitudes, axis=0, norm="ortho"), axes=0)
    return SpinorField(grid, psi, energy)


def plane_wave_spinor(
    grid: UniformGrid,
    mode: int,
    sign: Union[Branch, str] = Branch.POSITIVE,
    spin: Union[Spin, str] = Spin.UP,
    m: float = 1.0,
    c: float = C_LIGHT,
) -> SpinorField:
    """u(p_k, E) exp(i p_k x), normalized, tagged with its free energy."""
    slot = grid.mode_slot(mode)[0]
    u, energy = free_spinor(grid.axis_momenta[slot], sign, spin, m, c)
    a = np.zeros((grid.n, 4), dtype=np.complex128)
    a[slot] = u.values
    return spinor_from_momentum(grid, a, energy)


@dataclass(frozen=True)
class EMPotentialField:
    """Scalar potential A0 and axial vector potential A_par felt by charge q."""

    grid: UniformGrid
    A0: np.ndarray = field(repr=False)
    A_par: np.ndarray = field(repr=False)
    charge: float = ELECTRON_CHARGE
    label: str = "custom"

    def __post_init__(self):
        if self.grid.dim != 1:
            raise GridError("Dirac potentials live on 1D grids")
        for name in ("A0", "A_par"):
            arr = np.array(getattr(self, name), dtype=np.float64).reshape(-1)
            if arr.size != self.grid.n:
                raise GridError(f"{name} needs {self.grid.n} values, got {arr.size}")
            if not np.all(np.isfinite(arr)):
                raise PotentialError(f"{name} of {self.label!r} has non-finite values")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if not np.isfinite(self.charge):
            raise PotentialError(f"charge must be finite, got {self.charge}")

    @property
    def potential_energy(self) -> np.ndarray:
        return self.charge * self.A0


def _dirac_free(grid: UniformGrid, charge: float):
    zeros = np.zeros(grid.n)
    return zeros, zeros, "dirac-free"


def _dirac_well(grid: UniformGrid, charge: float, depth: float = 0.5, width: float = 2.0):
    if charge == 0:
        raise PotentialError("a Dirac well needs a non-zero charge")
    inside = np.abs(grid.axis_points) < 0.5 * width
    a0 = np.where(inside, -depth / charge, 0.0)
    return a0, np.zeros(grid.n), f"dirac-well(depth={depth:g},width={width:g})"


def _dirac_gaussian(grid: UniformGrid, charge: float, depth: float = 0.1, sigma: float = 1.0):
    if charge == 0 or sigma <= 0:
        raise PotentialError("a Gaussian well needs a non-zero charge and sigma > 0")
    a0 = -(depth / charge) * np.exp(-0.5 * (grid.axis_points / sigma) ** 2)
    return a0, np.zeros(grid.n), f"dirac-gaussian(depth={depth:g},sigma={sigma:g})"


def _dirac_constant_a(grid: UniformGrid, charge: float, a: float = 1.0):
    return np.zeros(grid.n), np.full(grid.n, float(a)), f"dirac-constant-A(a={a:g})"


EM_PRESETS = {
    "dirac-free": _dirac_free,
    "dirac-well": _dirac_well,
    "dirac-gaussian": _dirac_gaussian,
    "dirac-constant-A": _dirac_constant_a,
}


def make_em_potential(grid: UniformGrid, name: str, charge: float = ELECTRON_CHARGE, **params) -> EMPotentialField:
    try:
        builder = EM_PRESETS[name]
    except KeyError:
        raise PotentialError(f"unknown Dirac potential {name!r}; choose from {sorted(EM_PRESETS)}") from None
    try:
        a0, a_par, label = builder(grid, charge, **params)
    except TypeError as exc:
        raise PotentialError(f"bad parameters for {name!r}: {exc}") from exc
    return EMPotentialField(grid, a0, a_par, charge, label)


def nonrelativistic_potential(pot: EMPotentialField) -> PotentialField:
    """Schrodinger potential q A0 with the same samples; A_par must vanish."""
    if np.any(pot.A_par != 0.0):
        raise PotentialError("the non-relativistic counterpart needs A_par = 0")
    return PotentialField(pot.grid, pot.potential_energy, f"{pot.label}[q*A0]")


# -----------------------------
# Hamiltonian and eigenpairs
# -----------------------------
def assemble_dirac_hamiltonian(pot: EMPotentialField, m: float = 1.0, c: float = C_LIGHT) -> np.ndarray:
    """
    c alpha_z (p - qA/c) + beta m c^2 + q A0 in the momentum (x) spinor basis,
    potentials coupling modes through their transforms.
    """
    grid = pot.grid
    if grid.n > MAX_DIRAC_POINTS:
        raise GridError(f"Dirac grid has {grid.n} points; dense assembly is limited to {MAX_DIRAC_POINTS}")
    if m <= 0 or c <= 0:
        raise ValueError(f"mass and c must be positive, got m={m}, c={c}")
    alpha_z, eye4 = GAMMAS.alpha(3), np.eye(4)
    scalar = potential_coupling(PotentialField(grid, pot.potential_energy))
    vector = potential_coupling(PotentialField(grid, pot.charge * pot.A_par))
    h = np.kron(np.diag(grid.axis_momenta * c), alpha_z)
    h += np.kron(np.eye(grid.n), m * c**2 * GAMMAS.beta)
    h += np.kron(scalar, eye4)
    h -= np.kron(vector, alpha_z)
    return 0.5 * (h + h.conj().T)


def dirac_spectrum(pot: EMPotentialField, m: float = 1.0, c: float = C_LIGHT) -> np.ndarray:
    """All 4N eigenvalues, both branches, ascending."""
    return np.linalg.eigvalsh(assemble_dirac_hamiltonian(pot, m, c))


@dataclass(frozen=True)
class DiracSolution(EigenSolution):
    c: float = C_LIGHT

    @property
    def rest_energy(self) -> float:
        return self.mass * self.c**2

    @property
    def binding_energies(self) -> np.ndarray:
        return self.rest_energy - self.energies


def solve_dirac(pot: EMPotentialField, m: float = 1.0, c: float = C_LIGHT, count: int = 1) -> DiracSolution:
    """Lowest ``count`` eigenpairs of the positive-energy branch."""
    grid = pot.grid
    h = assemble_dirac_hamiltonian(pot, m, c)
    context = f"{pot.label}, n={grid.n}, extent={grid.extent:g}, c={c:g}"
    if count > 2 * grid.n:
        raise ValueError(f"count must lie in [1, {2 * grid.n}], got {count}")
    energies, vectors = eigh_window(h, count, context, first=2 * grid.n)
    if np.any(energies <= 0.0):
        raise SolverError(
            f"positive-branch window holds non-positive energies ({context}): "
            f"lowest {energies[0]:.6f}; the potential mixes the branches"
        )
    logger.debug("dirac %s: binding energies %s", context, (m * c**2 - energies)[:4])
    states = tuple(
        spinor_from_momentum(grid, fix_phase(vec.reshape(grid.n, 4)), energy)
        for energy, vec in zip(energies, vectors.T)
    )
    return DiracSolution(grid, count, energies, states, m, pot, pot.label, c)


# -----------------------------
# Checks
# -----------------------------
def _apply_momentum(state: SpinorField) -> np.ndarray:
    a = spinor_to_momentum(state) * state.grid.axis_momenta[:, None]
    return sfft.fftshift(sfft.ifft(a, axis=0, norm="ortho"), axes=0)


def _require_grid(state: SpinorField, pot: EMPotentialField) -> None:
    if state.grid != pot.grid:
        raise GridError(f"spinor grid {state.grid} differs from potential grid {pot.grid}")


def theta_field(state: SpinorField, pot: EMPotentialField, m: float = 1.0, c: float = C_LIGHT) -> np.ndarray:
    """Theta(x) = [gamma^0 (E - qA0) - gamma^3 (p - qA/c) c - m c^2] psi(x)."""
    _require_grid(state, pot)
    if state.energy is None:
        raise NormalizationError("spinor state carries no energy tag")
    psi, q = state.values, pot.charge
    g0, g3 = GAMMAS.gamma0, GAMMAS.gamma3
    theta = (state.energy - q * pot.A0)[:, None] * (psi @ g0.T)
    theta -= c * (_apply_momentum(state) @ g3.T)
    theta += (q * pot.A_par)[:, None] * (psi @ g3.T)
    theta -= m * c**2 * psi
    return theta


def theta_residual(state: SpinorField, pot: EMPotentialField, m: float = 1.0, c: float = C_LIGHT) -> ResidualReport:
    """Pointwise size of Theta and its average psi-bar Theta over the grid."""
    require_stationary(state)
    theta = theta_field(state, pot, m, c)
    psi = state.values
    return ResidualReport(
        pointwise_max=float(np.max(np.linalg.norm(theta, axis=1))),
        pointwise_l2=float(np.linalg.norm(theta) / np.linalg.norm(psi)),
        averaged_residual=float(np.vdot(psi, theta @ GAMMAS.gamma0.T).real),
    )


class LinearRelation(NamedTuple):
    lhs: float
    rhs: float

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


def linear_relation_sides(state: SpinorField, pot: EMPotentialField, m: float = 1.0, c: float = C_LIGHT) -> LinearRelation:
    """
    Both sides of the averaged linear energy relation, contracted with psi-bar:
    free part from the amplitudes, sum_k a^dagger (E - c alpha p - beta m c^2) a,
    against the potential part sum_j psi^dagger (qA0 - alpha q A_par) psi.
    """
    require_stationary(state)
    _require_grid(state, pot)
    a = spinor_to_momentum(state)
    blocks = np.array([momentum_block(p, m, c) for p in state.grid.axis_momenta])
    lhs = state.energy * np.vdot(a, a).real - np.einsum("ks,kst,kt->", a.conj(), blocks, a).real
    psi, q = state.values, pot.charge
    alpha_z = GAMMAS.alpha(3)
    coupled = (q * pot.A0)[:, None] * psi - (q * pot.A_par)[:, None] * (psi @ alpha_z.T)
    rhs = np.vdot(psi, coupled).real
    return LinearRelation(float(lhs), float(rhs))


def averaged_linear_relation(state: SpinorField, pot: EMPotentialField, m: float = 1.0, c: float = C_LIGHT) -> float:
    return linear_relation_sides(state, pot, m, c).residual


class BranchWeights(NamedTuple):
    positive: float
    negative: float

    @property
    def branch(self) -> Branch:
        return Branch.POSITIVE if self.positive >= self.negative else Branch.NEGATIVE


def branch_weights(state: SpinorField, m: float = 1.0, c: float = C_LIGHT) -> BranchWeights:
    """Weight of the state on the free u(p_k, +E_k) and u(p_k, -E_k) spinors."""
    a = spinor_to_momentum(state)
    weights = {Branch.POSITIVE: 0.0, Branch.NEGATIVE: 0.0}
    for slot, p in enumerate(state.grid.axis_momenta):
        for sign in Branch:
            for spin in Spin:
                u, _ = free_spinor(p, sign, spin, m, c)
                weights[sign] += abs(np.vdot(u.values, a[slot])) ** 2
    total = sum(weights.values())
    return BranchWeights(weights[Branch.POSITIVE] / total, weights[Branch.NEGATIVE] / total)


def spinor_dominant_modes(state: SpinorField, top: int = 5) -> list[dict]:
    """Largest sum_s |a_s(p_k)|^2 modes."""
    w = np.sum(np.abs(spinor_to_momentum(state)) ** 2, axis=1)
    order = np.argsort(-w, kind="stable")[:top]
    grid = state.grid
    return [
        {"mode": [int(grid.axis_modes[i])], "momentum": [float(grid.axis_momenta[i])], "weight": float(w[i])}
        for i in order
    ]


def paired_spectrum_error(energies: Sequence[float]) -> float:
    """max |E_i + E_{n-1-i}| of an ascending spectrum (E -> -E symmetry)."""
    e = np.sort(np.asarray(energies))
    return float(np.max(np.abs(e + e[::-1])))


def dirac_energy_breakdown(state: SpinorField, pot: EMPotentialField, m: float = 1.0, c: float = C_LIGHT) -> EnergyBreakdown:
    """Free part a^dagger(c alpha p + beta mc^2)a, coupling part, tag and their mismatch."""
    sides = linear_relation_sides(state, pot, m, c)
    return EnergyBreakdown(
        kinetic_avg=float(state.energy - sides.lhs),
        potential_avg=sides.rhs,
        total_avg=float(state.energy),
        relation_residual=sides.residual,
    )
