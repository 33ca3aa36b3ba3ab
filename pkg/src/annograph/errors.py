"""Exception hierarchy shared by every module of the engine.

Each class carries a stable ``code`` string.  The HTTP service and the CLI
report that code verbatim, so callers can match on machine-readable names
instead of on message text.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all errors raised by this package."""

    code = "ENGINE_ERROR"


# --- graph errors -----------------------------------------------------------

class GraphError(EngineError):
    code = "GRAPH_ERROR"


class DanglingReference(GraphError):
    """A reference names a token, mention, or relation that does not exist."""

    code = "DANGLING_REFERENCE"

    def __init__(self, message: str, locator: str | None = None):
        self.locator = locator
        if locator:
            message = f"{locator}: {message}"
        super().__init__(message)


class CycleDetected(GraphError):
    """The operation would make a relation transitively reference itself."""

    code = "CYCLE_DETECTED"


class DuplicateId(GraphError):
    code = "DUPLICATE_ID"


class UnknownId(GraphError):
    code = "UNKNOWN_ID"


class UnknownType(GraphError):
    """A type name is missing from the active taxonomy."""

    code = "UNKNOWN_TYPE"


class InvalidRelation(GraphError):
    """Relation violates a structural constraint (e.g. arity)."""

    code = "INVALID_RELATION"


class InvalidArgIndex(GraphError):
    code = "INVALID_ARG_INDEX"


class UnknownTypeWarning(UserWarning):
    """A visibility filter named a type absent from the taxonomy."""


# --- parse / serialize errors ------------------------------------------------

class ParseIssueError(EngineError):
    """One localized problem in an input file.

    ``locator`` is human-readable ("line 12", "document 2 annotation T4") and
    is included in CLI output and service error bodies.
    """

    code = "PARSE_ERROR"

    def __init__(self, message: str, locator: str | None = None):
        self.locator = locator
        if locator:
            message = f"{locator}: {message}"
        super().__init__(message)


class MalformedLine(ParseIssueError):
    code = "MALFORMED_LINE"


class OffsetOutOfBounds(ParseIssueError):
    code = "OFFSET_OUT_OF_BOUNDS"


class TextMismatch(ParseIssueError):
    code = "TEXT_MISMATCH"


class ColumnCountMismatch(ParseIssueError):
    code = "COLUMN_COUNT_MISMATCH"


class NonNumericHead(ParseIssueError):
    code = "NON_NUMERIC_HEAD"


class HeadOutOfRange(ParseIssueError):
    code = "HEAD_OUT_OF_RANGE"


class XmlMalformed(ParseIssueError):
    code = "XML_MALFORMED"


class UnknownRefId(ParseIssueError):
    code = "UNKNOWN_REF_ID"


class DuplicateTypeName(ParseIssueError):
    code = "DUPLICATE_TYPE_NAME"


class BadIndentation(ParseIssueError):
    code = "INDENTATION_ERROR"


class ParseFailure(EngineError):
    """Raised when an input has one or more fatal problems.

    Collects every :class:`ParseIssueError` found so tools can report all of
    them at once instead of stopping at the first.
    """

    code = "PARSE_FAILURE"

    def __init__(self, issues: list[ParseIssueError]):
        self.issues = list(issues)
        summary = "; ".join(str(i) for i in self.issues[:5])
        if len(self.issues) > 5:
            summary += f"; ... ({len(self.issues)} problems)"
        super().__init__(summary)
        if self.issues:
            self.code = self.issues[0].code


class NotRepresentable(EngineError):
    """The target format cannot express any of the document."""

    code = "NOT_REPRESENTABLE"


# --- layout errors -----------------------------------------------------------

class LayoutError(EngineError):
    code = "LAYOUT_ERROR"


class TokenTooWide(LayoutError):
    code = "TOKEN_TOO_WIDE"


class RangeOutOfBounds(LayoutError):
    code = "RANGE_OUT_OF_BOUNDS"


# --- edit session errors ------------------------------------------------------

class SessionError(EngineError):
    code = "SESSION_ERROR"


class NothingToUndo(SessionError):
    code = "NOTHING_TO_UNDO"


class BaseMismatch(SessionError):
    """A diff's base hash does not match the document it is replayed onto."""

    code = "BASE_MISMATCH"


class ReplayConflict(SessionError):
    """An operation failed while replaying a diff log."""

    code = "REPLAY_CONFLICT"

    def __init__(self, seq: int, cause: Exception):
        super().__init__(f"op {seq} failed during replay: {cause}")
        self.seq = seq
        self.cause = cause
