"""Basic tests for the project layout and the module set."""

import os
import sys

import pytest

# Add src to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

ROOT = os.path.join(os.path.dirname(__file__), '..')


def test_module_imports():
    """Test that all main modules can be imported."""
    try:
        import basis  # noqa: F401
        import config  # noqa: F401
        import dirac  # noqa: F401
        import main  # noqa: F401
        import momentum  # noqa: F401
        import report  # noqa: F401
        import schrodinger  # noqa: F401
        import utils  # noqa: F401
        import verify  # noqa: F401
    except ImportError as e:
        pytest.fail(f"Failed to import modules: {e}")


def test_requirements_file_exists():
    """Test that requirements.txt exists and lists the numerical stack."""
    path = os.path.join(ROOT, 'requirements.txt')
    assert os.path.exists(path), "requirements.txt does not exist"

    with open(path, 'r') as f:
        content = f.read()
    for package in ("numpy", "scipy", "pandas", "threadpoolctl"):
        assert package in content, f"{package} missing from requirements.txt"


def test_errors_share_a_base_class():
    import errors

    for name in ("GridError", "RepresentationError", "NormalizationError", "PotentialError",
                 "SolverError", "ConfigError", "CheckFailure", "StateFileError"):
        assert issubclass(getattr(errors, name), errors.PlaneWaveError)
