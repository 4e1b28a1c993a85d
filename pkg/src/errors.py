# errors.py
"""Exception types shared by the solver, verification and CLI modules."""


class PlaneWaveError(Exception):
    """Base class for every error raised by the toolkit."""


class GridError(PlaneWaveError, ValueError):
    """Grid rule violated (size, extent, dimension) or grid too large."""


class RepresentationError(PlaneWaveError, ValueError):
    """Operands live on different grids or in different representations."""


class NormalizationError(PlaneWaveError, ValueError):
    """Zero-norm or unnormalized state, or a state without an energy tag."""


class PotentialError(PlaneWaveError, ValueError):
    """Non-finite potential values or an unknown potential preset."""


class SolverError(PlaneWaveError, RuntimeError):
    """Eigensolver failure or non-convergence; message carries diagnostics."""


class ConfigError(PlaneWaveError, ValueError):
    """Bad run configuration. ``key`` names the offending setting."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class CheckFailure(PlaneWaveError):
    """A physics check exceeded its tolerance."""


class StateFileError(PlaneWaveError, ValueError):
    """Stored states are missing, unreadable or do not fit the configured grid."""
