"""Exception hierarchy for astjudge.

Everything the toolkit raises on bad input derives from AstJudgeError so the
corpus runner can record a failing revision and keep going.
"""
from __future__ import annotations


class AstJudgeError(Exception):
    """Base class for all toolkit errors."""


class SourceSyntaxError(AstJudgeError, SyntaxError):
    """Source text outside the supported Java-like grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.msg = message
        self.line = line
        self.column = column
        self.lineno = line
        self.offset = column


class SchemaError(AstJudgeError, ValueError):
    """An interchange document or mapping violates a structural invariant.

    The message always starts with the name of the violated invariant,
    e.g. "multiple roots" or "label mismatch".
    """


class ConfigError(AstJudgeError, ValueError):
    """Configuration value out of range or unknown config key."""


class RevisionError(AstJudgeError):
    """A revision directory is incomplete or references a missing document."""
