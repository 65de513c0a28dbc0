"""Exception hierarchy shared by the library and the CLI exit-code mapping."""

from __future__ import annotations


class HmvolError(Exception):
    """Base class for all library errors."""


class ExpressionError(HmvolError):
    """Malformed lattice expression (syntax or semantic node error).

    `offset` is the byte offset into the source text; `expected` lists the
    token kinds that would have been accepted at that point (empty for
    semantic errors).
    """

    def __init__(self, message: str, offset: int, expected: tuple[str, ...] = ()):
        self.offset = offset
        self.expected = expected
        if expected:
            message = f"{message} at offset {offset} (expected one of: {', '.join(expected)})"
        else:
            message = f"{message} at offset {offset}"
        super().__init__(message)


class PreconditionError(HmvolError):
    """An operation was called outside its stated domain."""


class FeasibilityError(HmvolError):
    """A brute-force enumeration guard was exceeded."""


class InternalCheckError(HmvolError):
    """An internal consistency assertion failed; indicates a bug, not bad input."""
