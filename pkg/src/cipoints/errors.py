"""Shared exception types with a stable CLI exit-code mapping."""


class ValidationError(ValueError):
    """Malformed or inconsistent input; maps to CLI exit code 2."""


class BudgetExceededError(RuntimeError):
    """An enumeration or field size exceeds the configured budget; exit code 3."""


class BoundViolationError(RuntimeError):
    """A hard bound failed during verification; exit code 1."""
