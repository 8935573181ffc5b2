"""Exception hierarchy shared across the pipeline."""

from __future__ import annotations


class CollabMarketError(Exception):
    """Base class for every error this package raises deliberately."""


class ParseError(CollabMarketError):
    """A line or row of an input file could not be parsed."""

    def __init__(self, path: object, line_no: int, message: str) -> None:
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


class ValidationError(CollabMarketError):
    """A record violates a structural invariant (duplicate id, bad value)."""


class ReferentialError(CollabMarketError):
    """A record points at an entity that does not exist in its registry."""


class ComputationError(CollabMarketError):
    """An indicator computation received inconsistent numeric inputs."""


class DiffError(CollabMarketError):
    """Two snapshots cannot be compared."""


class UsageError(CollabMarketError):
    """The caller asked for something the interface does not offer."""
