"""Exception hierarchy shared by all modules."""


class DYError(Exception):
    """Base class for every error raised by the package."""


class FieldMismatchError(DYError):
    pass


class DimensionError(DYError):
    pass


class StructuralError(DYError):
    """A presentation table has the wrong shape or references missing data."""

    def __init__(self, table, message):
        self.table = table
        super().__init__(f"{table}: {message}")


class StrictnessError(DYError):
    pass


class PreconditionError(DYError):
    pass


class BudgetError(DYError):
    pass


class ClosureError(DYError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class GroupTableError(DYError):
    pass


class UnitalizationError(DYError):
    pass


class MonoidalityError(DYError):
    pass


class ConsistencyError(DYError):
    """An internal postcondition failed; results are never returned silently."""
