"""Numerical toolkit for quasisymmetric maps, Zygmund fields and Teichmüller bounds."""

from .errors import ConfigError, DomainError, InvariantViolation, NumericsError, TeichError

__version__ = "0.1.0"

__all__ = ["ConfigError", "DomainError", "InvariantViolation", "NumericsError", "TeichError", "__version__"]
