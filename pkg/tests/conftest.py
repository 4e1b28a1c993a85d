"""Shared fixtures: solved problems are reused across test modules."""

import os
import sys

import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from basis import make_grid  # noqa: E402
from dirac import make_em_potential, solve_dirac  # noqa: E402
from schrodinger import make_potential, solve_eigen, solve_hydrogen_radial  # noqa: E402


BOX_WIDTH = 1.0


@pytest.fixture(scope="session")
def oscillator():
    """Harmonic oscillator, omega = 1, N = 128, L = 20, ten lowest states."""
    pot = make_potential(make_grid(1, 128, 20.0), "harmonic", omega=1.0)
    return pot, solve_eigen(pot, mass=1.0, count=10)


@pytest.fixture(scope="session")
def box():
    """Box of width 1 centred in a cell of length 2 (its odd-image cell), N = 512."""
    pot = make_potential(make_grid(1, 512, 2.0 * BOX_WIDTH), "box", width=BOX_WIDTH)
    return pot, solve_eigen(pot, mass=1.0, count=3)


@pytest.fixture(scope="session")
def hydrogen():
    return solve_hydrogen_radial(n_grid=2048, r_max=40.0, count=2)


@pytest.fixture(scope="session")
def free_dirac():
    pot = make_em_potential(make_grid(1, 32, 40.0), "dirac-free")
    return pot, solve_dirac(pot, count=4)


@pytest.fixture(scope="session")
def dirac_well():
    pot = make_em_potential(make_grid(1, 128, 40.0), "dirac-well", depth=0.5, width=2.0)
    return pot, solve_dirac(pot, count=4)
