"""
Source spans and diagnostics shared by the parser and the analyzer.
"""

from dataclasses import dataclass
from enum import Enum


class Severity(str, Enum):
    ERROR = 'error'
    WARNING = 'warning'


@dataclass(frozen=True)
class Span:
    """Location of a node in its source text (1-based line and column)."""

    line: int
    column: int
    length: int
    offset: int = 0

    def __str__(self):
        return f'{self.line}:{self.column}'


@dataclass(frozen=True)
class Diagnostic:
    """A message about a location in a VML source."""

    severity: Severity
    span: Span
    code: str
    message: str

    @classmethod
    def error(cls, span, code, message):
        return cls(Severity.ERROR, span or NO_SPAN, code, message)

    @classmethod
    def warning(cls, span, code, message):
        return cls(Severity.WARNING, span or NO_SPAN, code, message)

    @property
    def is_error(self):
        return self.severity is Severity.ERROR

    def render(self, filename='<input>'):
        """Format as `file:line:col: severity[code]: message`."""
        return (f'{filename}:{self.span.line}:{self.span.column}: '
                f'{self.severity.value}[{self.code}]: {self.message}')


NO_SPAN = Span(0, 0, 0)


def has_errors(diagnostics):
    return any(d.is_error for d in diagnostics)


def sort_diagnostics(diagnostics):
    """Order diagnostics by position, then code, for stable reports."""
    return sorted(
        diagnostics,
        key=lambda d: (d.span.offset, d.span.line, d.span.column, d.code,
                       d.message),
    )
