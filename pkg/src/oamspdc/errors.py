"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ConvergenceError(ArithmeticError):
    """A quadrature failed to converge within its doubling budget."""
