"""
Exceptions raised by the VML toolchain.
"""


class VMLError(Exception):
    """Base class for every error raised by the toolchain."""


class InvalidType(VMLError):
    """A value space declaration violates its invariants."""


class DimensionMismatch(VMLError):
    """Two units of different dimensions were combined."""


class DivisionByZero(VMLError):
    """An expression divided by zero."""


class UnboundVariable(VMLError):
    """An expression referenced a name missing from its environment."""

    def __init__(self, name):
        super().__init__(f'Unbound variable {name!r}.')
        self.name = name


class DiagnosticError(VMLError):
    """A stage failed and produced error diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        errors = [d for d in self.diagnostics if d.is_error]
        first = errors[0] if errors else None
        summary = first.message if first else 'no diagnostics'
        super().__init__(f'{len(errors)} error(s): {summary}')


class NonLinearizedTerm(VMLError):
    """A nonlinear definition reached MiniZinc emission."""


class IncompleteBinding(VMLError):
    """A cost evaluation is missing context or variation point values."""


class DomainTooLarge(VMLError):
    """The joint domain exceeds the brute-force limit."""


class UnknownContext(VMLError):
    """A context update named an undeclared context variable."""


class MissingContext(VMLError):
    """A query found a context of the model without a value."""


class ScriptError(VMLError):
    """A scenario script line could not be read."""

    def __init__(self, line, message):
        super().__init__(f'line {line}: {message}')
        self.line = line


class ManifestError(VMLError):
    """A pipeline manifest is invalid."""
