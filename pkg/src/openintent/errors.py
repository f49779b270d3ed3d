"""Shared exception types."""


class ValidationError(ValueError):
    """Input violates a documented precondition or file-format contract."""
