"""Errors raised by the document grammar layer.

Every error carries a stable ``code`` token so corpus sidecar files and the
HTTP layer can match on it without parsing messages.
"""

from __future__ import annotations


class LangGptError(Exception):
    """Base class for all document-model errors."""

    code = "LangGptError"


class ParseError(LangGptError):
    """A document could not be parsed. Carries the 1-based source line."""

    code = "ParseError"

    def __init__(self, message: str, line: int = 0):
        super().__init__(message)
        self.line = line

    def __str__(self) -> str:
        base = super().__str__()
        return f"line {self.line}: {base}" if self.line else base


class MissingRoleError(ParseError):
    """No level-1 ``# Role:`` heading opens the document."""

    code = "MissingRole"


class DuplicateModuleError(ParseError):
    """The same module (or custom module name) appears twice."""

    code = "DuplicateModule"

    def __init__(self, kind_name: str, line: int = 0):
        super().__init__(f"duplicate module: {kind_name}", line)
        self.kind_name = kind_name


class MalformedHeadingError(ParseError):
    """A heading-marker line does not fit the grammar."""

    code = "MalformedHeading"


class EmptySlotError(LangGptError):
    """A template slot was empty or whitespace-only."""

    code = "EmptySlot"


class NoActionsError(LangGptError):
    """An action element was given zero steps."""

    code = "NoActions"
