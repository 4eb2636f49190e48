"""Shared exception types."""

__all__ = ["ConsistencyError", "TruncationError"]


class ConsistencyError(ArithmeticError):
    """Two independent evaluation routes for the same quantity disagree."""


class TruncationError(ValueError):
    """A truncated infinite sum carries more error than the caller allows."""
