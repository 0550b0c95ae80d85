"""Exception types raised by the numerical kernels and the CLI harness."""

from __future__ import annotations


class NumericsError(Exception):
    """Base class for failures of the numerical kernels."""


class SingularMatrixError(NumericsError):
    """LU elimination hit a (numerically) zero pivot."""

    def __init__(self, message: str, pivot_index: int):
        super().__init__(message)
        self.pivot_index = pivot_index


class NotPositiveDefiniteError(NumericsError):
    """Cholesky factorization failed; `order` is the offending leading minor."""

    def __init__(self, message: str, order: int):
        super().__init__(message)
        self.order = order


class EigenConvergenceError(NumericsError):
    """An eigenvalue iteration exceeded its sweep budget."""

    def __init__(self, message: str, block_size: int, sweeps: int):
        super().__init__(message)
        self.block_size = block_size
        self.sweeps = sweeps


class LyapunovSolveError(NumericsError):
    """The Lyapunov operator is singular; no unique solution exists."""


class StabilizationError(NumericsError):
    """Construction of the stabilizing transform failed at some parameter."""

    def __init__(self, message: str, parameter: float | None = None):
        super().__init__(message)
        self.parameter = parameter


class IntegrationError(NumericsError):
    """An implicit time step could not be completed."""

    def __init__(self, message: str, step: int, time: float):
        super().__init__(message)
        self.step = step
        self.time = time


class ConfigError(Exception):
    """Invalid experiment configuration; collects every violation found."""

    def __init__(self, violations: list[str]):
        super().__init__("\n".join(violations))
        self.violations = list(violations)
