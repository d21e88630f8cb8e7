"""Exception types shared across the package."""


class FairselectError(Exception):
    """Base class for all package errors."""


class ParameterError(FairselectError, ValueError):
    """An argument violates a documented precondition."""


class UnsupportedDimensionError(ParameterError):
    """The requested solver does not handle this dimensionality."""


class StateError(FairselectError, RuntimeError):
    """An operation was called in a state that does not permit it."""


class IngestError(FairselectError):
    """A dataset file could not be ingested."""


class ConstructionError(FairselectError):
    """A test-gadget construction is impossible; carries a margin report."""

    def __init__(self, message, margins=None):
        super().__init__(message)
        self.margins = margins
