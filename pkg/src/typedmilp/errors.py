"""Toolkit error type.

Every failure carries a stable ``code`` string (the codes are part of the
documented contract: the CLI maps them to exit statuses and the HTTP
service returns them in its error envelope). ``subject`` names a variable
or constraint where one is to blame.
"""

from __future__ import annotations


class ToolkitError(Exception):
    def __init__(self, code: str, message: str, subject: str | None = None):
        super().__init__(f"{code}: {message}" if subject is None else f"{code}: {message} ({subject})")
        self.code = code
        self.message = message
        self.subject = subject

    def envelope(self) -> dict:
        return {"code": self.code, "message": self.message, "subject": self.subject}


class ValidationFailed(ToolkitError):
    """Raised when an operation requires a clean model and validation found errors."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        first = self.diagnostics[0]
        summary = "; ".join(f"{d.code}: {d.message}" for d in self.diagnostics[:5])
        if len(self.diagnostics) > 5:
            summary += f"; … {len(self.diagnostics) - 5} more"
        super().__init__("ValidationFailed", summary, first.subject)


class ParseError(ToolkitError):
    """Malformed LP/MPS input, with a 1-based line (and column when known)."""

    def __init__(self, message: str, line: int, column: int | None = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__("ParseError", f"{message} ({where})")
        self.line = line
        self.column = column
