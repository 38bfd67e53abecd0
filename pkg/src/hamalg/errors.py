"""Exception types shared across the package."""


class HamalgError(Exception):
    """Base class for all package errors."""


class ShapeError(HamalgError, ValueError):
    """Mismatched dimensions, variable counts, or element kinds."""


class AlgebraError(HamalgError, ValueError):
    """Invalid algebra configuration or misuse of an operation."""
