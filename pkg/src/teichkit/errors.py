"""Exception hierarchy shared by every module.

Each class carries a ``category`` string and an ``exit_code`` so the CLI can
map a library failure to a distinct process status.
"""


class TeichError(Exception):
    category = "error"
    exit_code = 1


class DomainError(TeichError, ValueError):
    """Input outside the domain of an operation."""

    category = "domain"
    exit_code = 4


class InvariantViolation(TeichError):
    """A structural invariant (monotonicity, |mu| < 1, ...) failed."""

    category = "invariant"
    exit_code = 5


class NumericsError(TeichError):
    """Quadrature or limit process did not converge."""

    category = "numerics"
    exit_code = 6


class ConfigError(TeichError):
    category = "config"
    exit_code = 3
