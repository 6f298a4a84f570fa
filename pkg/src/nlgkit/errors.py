from __future__ import annotations


class NlgkitError(Exception):
    """Base class for all toolkit errors."""


class MRParseError(NlgkitError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class UnbalancedDelimiters(MRParseError):
    pass


class MissingActType(MRParseError):
    pass


class EmptyAttribute(MRParseError):
    pass


class MalformedSlot(MRParseError):
    pass


class EmptyReferences(NlgkitError, ValueError):
    pass


class EmptyInput(NlgkitError, ValueError):
    pass


class LengthMismatch(NlgkitError, ValueError):
    pass


class TooFewSamples(NlgkitError, ValueError):
    pass


class TooFewSystems(NlgkitError, ValueError):
    pass


class DatasetError(NlgkitError):
    """Unreadable or malformed dataset file."""


class Malformed(DatasetError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateId(DatasetError):
    pass
