"""Structured non-answers raised by the predicates.

Each carries a ``code`` that reports and the CLI surface verbatim.  None of
them is a refutation: they mark a precondition failure, an undecidable case
or an exhausted search bound.
"""

from __future__ import annotations

__all__ = [
    "ModcritError",
    "HypothesisViolation",
    "Undecidable",
    "NotApplicable",
    "NotFound",
    "NotWithinBound",
    "SizeBoundExceeded",
    "FixtureError",
]


class ModcritError(Exception):
    code = "ERROR"

    def __init__(self, message: str, **detail):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def as_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.detail:
            out["detail"] = {k: str(v) for k, v in sorted(self.detail.items())}
        return out


class HypothesisViolation(ModcritError):
    code = "HYPOTHESIS_VIOLATION"


class Undecidable(ModcritError):
    code = "UNDECIDABLE"


class NotApplicable(ModcritError):
    code = "NOT_APPLICABLE"


class NotFound(ModcritError):
    code = "NOT_FOUND"


class NotWithinBound(ModcritError):
    code = "NOT_WITHIN_BOUND"


class SizeBoundExceeded(ModcritError):
    code = "SIZE_BOUND_EXCEEDED"


class FixtureError(ModcritError):
    """Malformed fixture document; carries a path and optional line/column."""

    code = "PARSE_ERROR"

    def __init__(self, message: str, path: str = "", line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.path = path
        self.line = line
        self.column = column

    def __str__(self) -> str:
        where = ""
        if self.line is not None:
            where = f"line {self.line}, column {self.column}: "
        at = f" (at {self.path})" if self.path else ""
        return f"{where}{self.message}{at}"

    def as_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.path:
            out["path"] = self.path
        if self.line is not None:
            out["line"] = self.line
            out["column"] = self.column
        return out
