"""Exception types shared across the package."""


class LogpoleError(Exception):
    """Base class for all package errors."""


class ConfigurationError(LogpoleError, ValueError):
    """Bad parameters: jet order above the limit, infeasible grids, unknown names."""


class DomainError(LogpoleError, ValueError):
    """Argument outside the domain of a function (r = 0, omega <= 0, ...)."""


class NumericalError(LogpoleError, ArithmeticError):
    """A solver or quadrature failed to converge."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        extra = ", ".join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        return f"{base} ({extra})"
