"""Exception hierarchy shared by every credarg module."""

from __future__ import annotations


class CredargError(Exception):
    """Base class for all errors raised by credarg."""


class FormulaSyntaxError(CredargError):
    """A formula could not be parsed. ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} (at position {position})")


class UnknownAtomError(CredargError):
    def __init__(self, name: str, position: int | None = None):
        self.name = name
        self.position = position
        where = "" if position is None else f" (at position {position})"
        super().__init__(f"unknown atom {name!r}{where}")


class WorldSpaceError(CredargError):
    """Invalid atom vocabulary: bad name, duplicate, or too many atoms."""


class InconsistentPremisesError(CredargError):
    """The constraint system admits no distribution."""


class ImpossibleEvidenceError(CredargError):
    """The evidence has upper probability zero, so conditioning is undefined."""


class InconsistentCombinationError(InconsistentPremisesError):
    """Two uncertainty premises cannot be combined.

    ``conflict`` is a minimal tuple of statements that is jointly infeasible.
    """

    def __init__(self, message: str, conflict: tuple = ()):
        self.conflict = tuple(conflict)
        super().__init__(message)


class PremiseNotAcceptedError(CredargError):
    """An audited formula does not reach the threshold on its own."""


class SupportRejectedError(CredargError):
    """A supporting Schema II argument does not accept its conclusion."""


class TargetNotInEvidenceError(CredargError):
    """An elimination target is not among the main argument's evidence."""


class PartitionError(CredargError):
    """An act's utility clauses do not partition the world space."""


class ArgumentFileError(CredargError):
    """Syntax or structural error in an argument file."""

    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
