"""Exception hierarchy mapped to CLI exit codes."""


class WqedError(Exception):
    """Base class for package errors."""

    exit_code = 1


class ConfigError(WqedError):
    """Invalid configuration or model parameters (exit code 1)."""

    exit_code = 1


class ConvergenceError(WqedError):
    """A fixed-point iteration failed to converge (exit code 2)."""

    exit_code = 2

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SolverError(WqedError):
    """An eigensolver or root-finder failed (exit code 3)."""

    exit_code = 3


class NoBoundStateError(SolverError):
    """The below-band secular equation has no root in the bracket."""
