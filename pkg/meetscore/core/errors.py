"""
Exception hierarchy for meetscore.

Two families: ``InputError`` for files that cannot be read (parse failures) and
``ScoringError`` for inputs that parse but violate a scoring precondition.
"""

from typing import Optional


class MeetScoreError(Exception):
    """Base error carrying enough context for a file/line/rule diagnostic"""

    rule: str = "error"

    def __init__(
        self,
        message: str,
        *,
        path: Optional[str] = None,
        line: Optional[int] = None,
        rule: Optional[str] = None,
    ):
        super().__init__(message)
        self.message = message
        self.path = path
        self.line = line
        if rule is not None:
            self.rule = rule

    def with_path(self, path: str) -> "MeetScoreError":
        if self.path is None:
            self.path = path
        return self

    def diagnostic(self) -> str:
        location = self.path or "<input>"
        if self.line is not None:
            location = f"{location}:{self.line}"
        return f"{location}: [{self.rule}] {self.message}"


class InputError(MeetScoreError):
    """Input could not be parsed"""


class ParseError(InputError):
    rule = "parse"


class SchemaError(InputError):
    rule = "schema"

    def __init__(self, field: str, message: Optional[str] = None, **kwargs):
        super().__init__(message or f"missing or invalid field {field!r}", **kwargs)
        self.field = field


class ScoringError(MeetScoreError):
    """Input parsed but cannot be scored as requested"""


class OverlapWithinStream(ScoringError):
    rule = "overlap-within-stream"


class MissingTiming(ScoringError):
    rule = "missing-timing"


class EmptyToken(ScoringError):
    rule = "empty-token"


class EmptySession(ScoringError):
    rule = "empty-session"


class ZeroLengthReference(ScoringError):
    rule = "zero-length-reference"


class StateSpaceTooLarge(ScoringError):
    rule = "state-space"


class UnpairedSegments(ScoringError):
    rule = "unpaired-segments"


class AssignmentOverflow(ScoringError):
    rule = "assignment-overflow"
