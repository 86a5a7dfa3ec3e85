"""Exception hierarchy shared by all gbd modules."""

from __future__ import annotations


class GbdError(Exception):
    """Base class for all errors raised by this package."""


class FileDecodeError(GbdError):
    """A compressed instance file could not be decoded."""

    def __init__(self, path: str, reason: str):
        super().__init__(f"cannot decode {path}: {reason}")
        self.path = path
        self.reason = reason


class DimacsParseError(GbdError):
    """Clause data contained a token that is not an integer."""

    def __init__(self, offset: int, token: str):
        super().__init__(f"bad clause token {token!r} at byte offset {offset}")
        self.offset = offset
        self.token = token


class ParseError(GbdError):
    """Query text violates the query grammar.

    `position` is the byte offset of the offending character and
    `expected` names the token classes that would have been accepted there.
    """

    def __init__(self, message: str, position: int, expected: tuple[str, ...] = ()):
        detail = f"{message} at position {position}"
        if expected:
            detail += " (expected " + " or ".join(expected) + ")"
        super().__init__(detail)
        self.position = position
        self.expected = expected


class StoreError(GbdError):
    """Base class for attribute-store failures."""


class StoreFormatError(StoreError):
    """The database file exists but is not a usable store."""


class MalformedNameError(StoreError):
    """Attribute group name does not match the name grammar."""


class ReservedNameError(StoreError):
    """Attribute group name is reserved for internal use."""


class GroupExistsError(StoreError):
    """Attribute group already present in the catalog."""


class UnknownGroupError(StoreError):
    """Reference to an attribute group that is not in the catalog."""

    def __init__(self, name: str, known: tuple[str, ...]):
        super().__init__(
            f"unknown attribute {name!r} (known: {', '.join(known) or 'none'})"
        )
        self.name = name
        self.known = known


class InvalidValueError(StoreError):
    """Value rejected by the group's value kind."""


class CsvFormatError(StoreError):
    """CSV import input is malformed or lacks the hash column."""
