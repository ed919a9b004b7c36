"""Exception taxonomy shared across the engine.

Everything raised on purpose derives from SlotforgeError so callers (CLI,
service) can map failures to exit codes / HTTP statuses in one place.
"""

from __future__ import annotations


class SlotforgeError(Exception):
    """Base class for all engine errors."""


# -- corpus --

class IoError(SlotforgeError):
    """Unreadable or unwritable path."""


class FormatError(SlotforgeError):
    """Malformed record; carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DuplicateIdError(SlotforgeError):
    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        super().__init__(f"duplicate document id: {doc_id!r}")


class MissingSpanError(SlotforgeError):
    """Triple whose subject or object does not occur in its text."""


# -- providers --

class ProviderError(SlotforgeError):
    """External provider call failed after retries."""


class TimeoutError(ProviderError):  # noqa: A001 - scoped to this package
    def __init__(self, message: str, attempts: int):
        self.attempts = attempts
        super().__init__(f"{message} (attempts={attempts})")


class TransportError(ProviderError):
    def __init__(self, message: str, attempts: int):
        self.attempts = attempts
        super().__init__(f"{message} (attempts={attempts})")


class BadResponseError(ProviderError):
    def __init__(self, message: str, attempts: int):
        self.attempts = attempts
        super().__init__(f"{message} (attempts={attempts})")


# -- induction --

class EmptyCorpusError(SlotforgeError):
    pass


class BadKError(SlotforgeError):
    pass


class PipelineError(SlotforgeError):
    """Stage failure inside run_induction; carries the stage tag."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[{stage}] {message}")


# -- slot mapping / evaluation --

class UnmappedError(SlotforgeError):
    """Evaluation requested before a slot mapping exists."""


# -- session --

class UnknownIdError(SlotforgeError):
    pass


class InvalidOpError(SlotforgeError):
    pass


class StaleStateError(SlotforgeError):
    """Optimistic-concurrency token mismatch."""

    def __init__(self, expected: int, current: int):
        self.expected = expected
        self.current = current
        super().__init__(f"stale revision {expected}, current is {current}")


class NoRelevantDocumentError(SlotforgeError):
    pass


class ReaderError(SlotforgeError):
    pass


class VersionError(SlotforgeError):
    def __init__(self, found: str, supported: str):
        self.found = found
        self.supported = supported
        super().__init__(f"snapshot version {found!r} not supported (supported: {supported!r})")


class CorruptSnapshotError(SlotforgeError):
    pass


# -- proxy --

class InsufficientExamplesError(SlotforgeError):
    """A slot has fewer in-context examples than requested (logged, not raised)."""


class NoJsonError(SlotforgeError):
    pass


class NoSlotKeyError(SlotforgeError):
    pass


class AgentError(SlotforgeError):
    pass
