"""Exception hierarchy shared across the package."""


class PslabError(Exception):
    """Base class for all package-specific failures."""


class ConfigError(PslabError):
    """Malformed configuration, file schema mismatch, or bad CLI input."""


class OutOfDomainError(PslabError):
    """A point, sphere, or ball leaves the grid box (with its margin)."""

    def __init__(self, msg, max_radius=None):
        super().__init__(msg)
        self.max_radius = max_radius


class NonConvergenceError(PslabError):
    """An iterative solve failed to reach its tolerance."""

    def __init__(self, msg, residual=None, history=None):
        super().__init__(msg)
        self.residual = residual
        self.history = history


class DivergenceError(NonConvergenceError):
    """Iteration produced NaN/Inf values."""


class DegenerateCenterError(PslabError):
    """H (or a sphere L2 mass) vanishes at the requested center."""


class StructureError(PslabError):
    """Input field lacks the structure an operation requires (e.g. no sign
    change of u - v)."""


class InsufficientDataError(PslabError):
    """Too few usable samples/rows for a fit or quotient."""


class MisuseError(PslabError):
    """An operation precondition on caller-supplied parameters is violated."""


class UnsupportedConfigurationError(PslabError):
    """A requested (dimension, degree, ...) combination is not implemented."""
