"""Exception types shared across the package."""


class Dgf2Error(Exception):
    """Base class for all package errors."""


class ValidationError(Dgf2Error):
    """Input data violates a structural invariant (bad degrees, d^2 != 0, ...).

    ``issues`` carries one human-readable string per violation.
    """

    def __init__(self, message, issues=None):
        super().__init__(message)
        self.issues = list(issues) if issues else [message]


class WindowError(Dgf2Error):
    """A degree window is malformed or too small (homology at a margin)."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class TerminationError(Dgf2Error):
    """A perturbation series exceeded its filtration bound."""


class InternalCheckError(Dgf2Error):
    """A consequence that is mathematically guaranteed failed to hold.

    This signals a bug in the artifact, never a mathematical discovery;
    the CLI maps it to exit code 3.
    """
