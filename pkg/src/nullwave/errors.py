"""Exception types shared across the package."""


class NullwaveError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(NullwaveError, ValueError):
    """Invalid configuration (bad grid, misaligned epsilon, unknown preset, ...).

    ``errors`` carries every problem found, not just the first.
    """

    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class GridRangeError(NullwaveError, IndexError):
    """Lattice index or stencil point outside the stored region."""


class ProvenanceError(NullwaveError, ValueError):
    """Fields built from different noise realizations were combined."""


class DataError(NullwaveError, ValueError):
    """Sample data unusable for the requested statistic."""
