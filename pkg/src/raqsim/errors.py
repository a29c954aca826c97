"""Exception and warning types shared across the package."""


class RaqsimError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(RaqsimError):
    """Invalid, incomplete or inconsistent configuration.

    ``problems`` lists every individual validation failure so callers can
    report them all at once instead of one per run.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DomainError(RaqsimError):
    """Input outside the mathematical domain of an operation."""


class SteadyStateError(RaqsimError):
    """The steady-state solve failed or produced an unphysical state.

    Carries a conditioning report of the linear system so the failure can be
    diagnosed without re-running the solve.
    """

    def __init__(self, message, condition_number=None, residual=None):
        self.condition_number = condition_number
        self.residual = residual
        parts = [message]
        if condition_number is not None:
            parts.append(f"condition number {condition_number:.3e}")
        if residual is not None:
            parts.append(f"residual {residual:.3e}")
        super().__init__("; ".join(parts))


class SlopeConvergenceError(RaqsimError):
    """Finite-difference slope estimates failed the step-halving check."""

    def __init__(self, message, coarse, fine):
        self.coarse = coarse
        self.fine = fine
        super().__init__(
            f"{message}: coarse estimate {coarse}, refined estimate {fine}"
        )


class CombinerError(RaqsimError):
    """Combining matrix could not be formed (rank deficiency or shape)."""

    def __init__(self, message, condition_number=None):
        self.condition_number = condition_number
        if condition_number is not None:
            message = f"{message} (condition number {condition_number:.3e})"
        super().__init__(message)


class GeometryError(RaqsimError):
    """User drop geometry is inconsistent (e.g. array inside the user disk)."""


class WeakProbeWarning(UserWarning):
    """Probe drive is outside the weak-probe regime; linear response degrades."""
