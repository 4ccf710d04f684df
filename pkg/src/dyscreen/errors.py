"""Exception hierarchy shared across the package."""

from __future__ import annotations


class DyscreenError(Exception):
    """Base class for all errors raised by this package."""


class DataError(DyscreenError):
    """Invalid records, malformed CSV rows, or broken dataset invariants."""


class MalformedSessionError(DyscreenError):
    """Event stream violates session structure (ordering, brackets, duplicates)."""


class IncompleteSessionError(DyscreenError):
    """Session cannot be finalized: question brackets are missing.

    ``missing_qids`` lists the question ids without a complete
    QuestionStart/QuestionEnd pair.
    """

    def __init__(self, message: str, missing_qids: list[int] | None = None):
        super().__init__(message)
        self.missing_qids = missing_qids or []


class ManifestError(DyscreenError):
    """Question manifest fails validation."""


class ArtifactError(DyscreenError):
    """Model artifact cannot be parsed, or its version tag is unsupported."""


class SessionStateError(DyscreenError):
    """Operation not valid for the session's current lifecycle state."""


class TrainingError(DyscreenError):
    """Training preconditions violated (e.g. single-class dataset)."""
