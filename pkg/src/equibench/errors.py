"""Exception types shared across the engine."""

from __future__ import annotations


class EquibenchError(Exception):
    """Base class for all engine errors."""


class RegistryParseError(EquibenchError):
    """A registry file row could not be parsed."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


class ConflictError(EquibenchError):
    """A uniqueness constraint was violated (duplicate code or id)."""


class NotFoundError(EquibenchError):
    """Lookup of a code, task, or dataset failed."""

    def __init__(self, kind: str, key: str):
        super().__init__(f"unknown {kind}: {key!r}")
        self.kind = kind
        self.key = key


class DomainError(EquibenchError):
    """A numeric argument is outside the operation's domain."""


class SnapshotError(EquibenchError):
    """A snapshot file is corrupt or has a bad checksum."""


class PayloadParseError(EquibenchError):
    """A submission or dataset payload could not be parsed; carries field errors."""

    def __init__(self, errors):
        msgs = "; ".join(f"{e.field}: {e.message}" for e in errors)
        super().__init__(f"parse failed: {msgs}")
        self.errors = list(errors)


class ValidationFailed(EquibenchError):
    """An event payload failed validation; carries the full report."""

    def __init__(self, report):
        msgs = "; ".join(f"{e.field}: {e.message}" for e in report.errors)
        super().__init__(f"validation failed: {msgs}")
        self.report = report
