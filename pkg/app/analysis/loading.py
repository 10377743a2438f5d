"""
One-call analysis of models and model files.
"""

from dataclasses import replace
from pathlib import Path

from core.diagnostics import Diagnostic, Span, has_errors
from core.exceptions import DiagnosticError

from analysis.checker import check, resolve_and_typecheck
from analysis.normalization import compute_normalization
from analysis.units import check_units
from language.grammar import parse, parse_model


def analyze(model, name='model', max_points=None):
    """Type-check, unit-check and normalize a parsed model."""
    tm = resolve_and_typecheck(model, name)
    diagnostics = check_units(tm)
    if has_errors(diagnostics):
        raise DiagnosticError(diagnostics)
    return replace(tm, normalization=compute_normalization(tm, max_points))


def read_source(path):
    """
    The text of a `.vml` file.

    Raises DiagnosticError locating the first byte that is not UTF-8.
    """
    data = Path(path).read_bytes()
    try:
        return data.decode('utf-8')
    except UnicodeDecodeError as error:
        before = data[:error.start]
        line = before.count(b'\n') + 1
        column = error.start - (before.rfind(b'\n') + 1) + 1
        raise DiagnosticError([Diagnostic.error(
            Span(line, column, 1, error.start), 'UnknownCharacter',
            f'Byte 0x{data[error.start]:02x} is not valid UTF-8.',
        )]) from None


def load_model(path, name=None):
    """Read, parse and analyze a `.vml` file, named by its stem by default."""
    path = Path(path)
    model = parse_model(read_source(path))
    return analyze(model, name or path.stem)


def check_source(text, name='model'):
    """
    Every diagnostic of a VML source, without raising.

    Stages run until one reports errors. Returns (TypedModel or None,
    diagnostics).
    """
    model, diagnostics = parse(text)
    if has_errors(diagnostics):
        return None, diagnostics
    tm, found = check(model, name)
    diagnostics = diagnostics + found
    if has_errors(diagnostics):
        return None, diagnostics
    diagnostics = diagnostics + check_units(tm)
    if has_errors(diagnostics):
        return None, diagnostics
    try:
        normalization = compute_normalization(tm)
    except DiagnosticError as error:
        return None, diagnostics + error.diagnostics
    return replace(tm, normalization=normalization), diagnostics
