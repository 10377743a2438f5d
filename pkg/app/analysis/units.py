"""
Unit checking of analyzed models.
"""

from core.diagnostics import Diagnostic
from core.exceptions import DimensionMismatch
from core.expressions import (
    COMPARISONS,
    LOGICAL,
    Binary,
    Call,
    Extremum,
    Literal,
    Unary,
    VarRef,
)
from core.units import Dimension, combine

from language.nodes import GeneralVarDecl


class UnitError(DimensionMismatch):
    """A DimensionMismatch located at an expression node."""

    def __init__(self, node, message):
        super().__init__(message)
        self.node = node


def expression_unit(expr, unit_of, record=None):
    """
    Derive the unit of `expr`; None means untagged.

    `unit_of(name)` gives the unit of a variable. When `record` is given,
    the unit of every node is stored in it under `id(node)`. Raises
    UnitError at the innermost node whose operands cannot be combined.
    """
    unit = _derive(expr, unit_of, record)
    if record is not None:
        record[id(expr)] = unit
    return unit


def _derive(expr, unit_of, record):
    if isinstance(expr, Literal):
        return None
    if isinstance(expr, VarRef):
        return unit_of(expr.name)
    if isinstance(expr, Unary):
        unit = expression_unit(expr.operand, unit_of, record)
        return None if expr.op == '!' else unit
    if isinstance(expr, Extremum):
        expression_unit(expr.body, unit_of, record)
        return None
    if isinstance(expr, Call) and expr.func == 'exp':
        expression_unit(expr.args[0], unit_of, record)
        return None
    if isinstance(expr, Call) and expr.func == 'abs':
        return expression_unit(expr.args[0], unit_of, record)
    if isinstance(expr, Binary) and expr.op in LOGICAL:
        expression_unit(expr.left, unit_of, record)
        expression_unit(expr.right, unit_of, record)
        return None
    if isinstance(expr, Binary):
        op, left, right = expr.op, expr.left, expr.right
    else:
        (left, right), op = expr.args, expr.func
    left_unit = expression_unit(left, unit_of, record)
    right_unit = expression_unit(right, unit_of, record)
    try:
        result = combine(op, left_unit, right_unit).result
    except DimensionMismatch as error:
        raise UnitError(expr, str(error)) from None
    return None if op in COMPARISONS else result


def _declared_unit_diagnostic(tm, declaration, unit):
    declared = tm.symbol(declaration.name).unit
    if unit is None or declared is None:
        return None
    if unit.dimension is declared.dimension \
            or Dimension.DIMENSIONLESS in (unit.dimension, declared.dimension):
        return None
    return Diagnostic.error(
        declaration.span, 'UnitMismatch',
        f'{declaration.name!r} is declared in {declared} but its '
        f'expression is in {unit}.',
    )


def check_units(tm):
    """Check every expression of `tm`; returns a list of diagnostics."""
    diagnostics = []
    for owner, expr in tm.expressions():
        try:
            unit = expression_unit(expr, tm.unit_of)
        except UnitError as error:
            diagnostics.append(Diagnostic.error(
                error.node.span or owner.span, 'UnitMismatch', str(error)))
            continue
        if isinstance(owner, GeneralVarDecl) and owner.type_name:
            mismatch = _declared_unit_diagnostic(tm, owner, unit)
            if mismatch is not None:
                diagnostics.append(mismatch)
    return diagnostics
