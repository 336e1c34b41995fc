"""Exception types and the structured verdict returned by every checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


class MuwmError(Exception):
    """Base class for errors raised by this package."""


class InvalidArgument(MuwmError, ValueError):
    pass


class StructureMismatch(MuwmError):
    """Two matrices do not share a block structure."""


class Unsupported(MuwmError):
    """A request outside the supported range (e.g. n=5 for weight 3)."""


class ParseError(MuwmError, ValueError):
    pass


class VerificationFailed(MuwmError):
    """A builder produced an object that did not pass its own verifier."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exact check.

    ``where`` locates the first counterexample (its meaning is documented by
    the producing function) and ``detail`` carries any extra data.
    Truthiness follows ``ok``.
    """

    ok: bool
    reason: str = ""
    where: tuple | None = None
    detail: dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, **detail) -> "Verdict":
        return cls(True, "", None, detail)

    @classmethod
    def failed(cls, reason: str, where: tuple | None = None, **detail) -> "Verdict":
        return cls(False, reason, where, detail)
