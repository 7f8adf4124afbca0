"""
Exception hierarchy for the ring-cavity simulator.

Every error carries the process exit code the command line front end returns.
"""

from typing import Any, Optional, Sequence

from .config import EXIT_CODES


class RingCavityError(Exception):
    """Base class for all simulator errors."""

    exit_code: int = 1


class ConfigError(RingCavityError):
    """Configuration text or values could not be turned into a valid run."""

    exit_code = EXIT_CODES['config']

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"[{', '.join(location)}] " if location else ""
        super().__init__(f"{prefix}{message}")


class ParameterError(ConfigError, ValueError):
    """A physical parameter violates its domain invariants."""

    def __init__(self, field: str, message: str):
        super().__init__(message, field=field)


class NumericalError(RingCavityError):
    """A numerical procedure failed."""

    exit_code = EXIT_CODES['numerical']


class SingularityError(NumericalError):
    """The response denominator d(delta) vanished at a requested detuning."""

    def __init__(self, delta: float, magnitude: float):
        self.delta = delta
        self.magnitude = magnitude
        super().__init__(
            f"|d(delta)| = {magnitude:.3e} below singularity floor at delta/omega_m = {delta:.12g}"
        )


class ConvergenceError(NumericalError):
    """Iterative root finding did not converge within its iteration cap."""

    def __init__(self, message: str, best_iterate: Sequence[complex], residuals: Sequence[float]):
        self.best_iterate = list(best_iterate)
        self.residuals = list(residuals)
        super().__init__(f"{message} (max residual {max(residuals, default=float('nan')):.3e})")


class ResolutionError(RingCavityError):
    """A spectral feature is not resolved by the sampling grid."""

    exit_code = EXIT_CODES['resolution']

    def __init__(self, message: str, feature: Any = None):
        self.feature = feature
        super().__init__(message)


class RefinementBudgetError(ResolutionError):
    """Adaptive refinement needed more points than the configured budget."""

    def __init__(self, points: int, budget: int):
        self.points = points
        self.budget = budget
        super().__init__(f"grid refinement needs {points} points, budget is {budget}")
