"""Exception types shared across the package.

The CLI maps these onto exit codes: validation problems exit 1, numerical
failures exit 2, file problems exit 3.
"""


class GrowthOrderError(Exception):
    """Base class for every error raised by this package."""


class DomainError(GrowthOrderError, ValueError):
    """An argument lies outside the domain of the model."""


class NoDoublingError(DomainError):
    """A zero interest rate never doubles a principal."""


class ParseError(DomainError):
    """Malformed input file or configuration."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}" if where else f"line {line}"
        super().__init__(f"{where}: {message}" if where else message)


class NumericalError(GrowthOrderError, ArithmeticError):
    """A numerical procedure failed to produce a trustworthy answer."""


class StepBudgetError(NumericalError):
    """The integrator ran out of steps before reaching the end time."""

    def __init__(self, t_reached: float, max_steps: int):
        self.t_reached = t_reached
        self.max_steps = max_steps
        super().__init__(f"step budget of {max_steps} exhausted at t = {t_reached!r}")


class BlowupError(NumericalError):
    """A trajectory diverged where a finite value was required."""

    def __init__(self, message: str, label: str | None = None, blowup_time: float | None = None):
        self.label = label
        self.blowup_time = blowup_time
        super().__init__(message)


class ConvergenceError(NumericalError):
    """A simulation did not settle within the allotted time."""

    def __init__(self, message: str, drift: float):
        self.drift = drift
        super().__init__(message)
