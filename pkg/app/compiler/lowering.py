"""
Lowering of analyzed models into constraint problems.
"""

import logging

from django.conf import settings

from core.diagnostics import Diagnostic
from core.exceptions import DiagnosticError
from core.expressions import (
    COMPARISONS,
    LOGICAL,
    ArrayEvaluator,
    Binary,
    Call,
    Extremum,
    Literal,
    Unary,
    VarRef,
)
from core.units import combine

from analysis.normalization import compute_normalization
from analysis.symbols import SymbolKind
from compiler.linearize import is_affine, piecewise_linearize
from compiler.problem import (
    TRUE,
    Constraint,
    ConstraintKind,
    ConstraintProblem,
    DecisionVariable,
    DefinitionTerm,
    GeneralVar,
    ObjectiveTerm,
    Parameter,
)
from language.nodes import AdaptationRule, Direction, Implication, VarpointDecl

logger = logging.getLogger(__name__)

SIGNS = {Direction.MINIMIZED: 1, Direction.MAXIMIZED: -1}


def _convert(expr, unit, target):
    if unit is None or target is None or unit.scale == target.scale:
        return expr
    return Binary('*', expr, Literal(unit.scale / target.scale), expr.span)


class Homogenizer:
    """
    Rewrites expressions of a TypedModel into unit-free trees.

    Operands are multiplied by explicit conversion factors wherever the
    unit rules convert them, range extrema become constants and enum
    literals become their codes.
    """

    def __init__(self, tm):
        self.tm = tm
        self.folder = ArrayEvaluator(tm.domains(), tm.units, tm.constants)

    def __call__(self, expr):
        return self.rewrite(expr)[0]

    def rewrite(self, expr):
        """Return (unit-free expression, unit of its value)."""
        if isinstance(expr, Literal):
            return expr, None
        if isinstance(expr, VarRef):
            symbol = self.tm.symbols.get(expr.name)
            if symbol is not None and symbol.kind is SymbolKind.ENUM_LITERAL:
                return Literal(symbol.declaration.code, expr.span), None
            return expr, self.tm.unit_of(expr.name)
        if isinstance(expr, Unary):
            operand, unit = self.rewrite(expr.operand)
            return (Unary(expr.op, operand, expr.span),
                    None if expr.op == '!' else unit)
        if isinstance(expr, Extremum):
            value = float(self.folder.evaluate(expr, {}))
            return Literal(value, expr.span), None
        if isinstance(expr, Binary) and expr.op in LOGICAL:
            left, _ = self.rewrite(expr.left)
            right, _ = self.rewrite(expr.right)
            return Binary(expr.op, left, right, expr.span), None
        if isinstance(expr, Binary):
            left, right, unit = self._pair(expr.op, expr.left, expr.right)
            return (Binary(expr.op, left, right, expr.span),
                    None if expr.op in COMPARISONS else unit)
        if isinstance(expr, Call) and len(expr.args) == 2:
            left, right, unit = self._pair(expr.func, *expr.args)
            return Call(expr.func, (left, right), expr.span), unit
        if isinstance(expr, Call):
            arg, unit = self.rewrite(expr.args[0])
            return (Call(expr.func, (arg,), expr.span),
                    unit if expr.func == 'abs' else None)
        raise TypeError(f'Unknown expression node {expr!r}.')

    def _pair(self, op, left, right):
        left, left_unit = self.rewrite(left)
        right, right_unit = self.rewrite(right)
        combination = combine(op, left_unit, right_unit)
        return (_convert(left, left_unit, combination.left),
                _convert(right, right_unit, combination.right),
                combination.result)


def homogenize(expr, tm):
    """The unit-free form of an expression of `tm`."""
    return Homogenizer(tm)(expr)


def _normalized(expr, extrema):
    """`(expr - lo) / (hi - lo)` scaled to the range of the function role."""
    if extrema.lo != 0:
        expr = Binary('-', expr, Literal(extrema.lo))
    expr = Binary('/', expr, Literal(extrema.hi - extrema.lo))
    if extrema.scale != 1.0:
        expr = Binary('*', expr, Literal(extrema.scale))
    return expr


def _mean(exprs):
    total = exprs[0]
    for expr in exprs[1:]:
        total = Binary('+', total, expr)
    if len(exprs) > 1:
        total = Binary('/', total, Literal(float(len(exprs))))
    return total


class _Lowering:

    def __init__(self, tm, ni, segments):
        self.tm = tm
        self.ni = ni
        self.segments = segments
        self.homogenize = Homogenizer(tm)
        self.diagnostics = []

    def run(self):
        objective = self._objective()
        if self.diagnostics:
            raise DiagnosticError(self.diagnostics)
        variables = tuple(DecisionVariable(s.name, s.type, s.unit)
                          for s in self.tm.varpoints)
        constraints = self._constraints()
        warnings = self._unbound(variables, constraints, objective)
        for warning in warnings:
            logger.warning('%s: %s', self.tm.name, warning.message)
        problem = ConstraintProblem(
            name=self.tm.name,
            parameters=tuple(Parameter(s.name, s.type, s.unit)
                             for s in self.tm.contexts),
            general_vars=self._general_vars(),
            variables=variables,
            constraints=constraints,
            objective=objective,
            segments=self.segments,
            warnings=tuple(warnings),
        )
        logger.debug(
            'Lowered %r: %d parameters, %d variables, %d constraints, '
            '%d objective terms.', problem.name, len(problem.parameters),
            len(variables), len(constraints), len(objective))
        return problem

    def _general_vars(self):
        general_vars = []
        for symbol in self.tm.general_vars:
            expr, unit = self.homogenize.rewrite(symbol.declaration.expr)
            expr = _convert(expr, unit, symbol.unit)
            general_vars.append(GeneralVar(
                symbol.name, expr, symbol.unit, symbol.value_type.kind.value))
        return tuple(general_vars)

    def _constraints(self):
        constraints = []
        for declaration in self.tm.model.declarations:
            if isinstance(declaration, AdaptationRule):
                constraints.append(Constraint(
                    declaration.name,
                    self.homogenize(declaration.condition),
                    self.homogenize(declaration.consequence),
                    ConstraintKind.RULE,
                ))
            elif isinstance(declaration, VarpointDecl):
                for index, item in enumerate(declaration.constraints, 1):
                    name = f'{declaration.name}#{index}'
                    if isinstance(item, Implication):
                        constraints.append(Constraint(
                            name, self.homogenize(item.guard),
                            self.homogenize(item.consequence),
                            ConstraintKind.IMPLICATION))
                    else:
                        constraints.append(Constraint(
                            name, TRUE, self.homogenize(item.relation),
                            ConstraintKind.INVARIANT))
        return tuple(constraints)

    def _objective(self):
        terms = []
        for prop in self.tm.model.properties:
            if prop.direction not in SIGNS:
                self.diagnostics.append(Diagnostic.error(
                    prop.span, 'MissingDirection',
                    f'Property {prop.name!r} must be minimized or '
                    f'maximized to enter the cost function.'))
                continue
            norm = self.ni[prop.name]
            weight = _mean([
                _normalized(self.homogenize(f.body), extrema)
                for f, extrema in zip(prop.priorities, norm.priorities)
            ])
            definitions = tuple(
                self._definition(f, extrema)
                for f, extrema in zip(prop.definitions, norm.definitions)
            )
            terms.append(ObjectiveTerm(prop.name, SIGNS[prop.direction],
                                       weight, definitions))
        return tuple(terms)

    def _definition(self, function, extrema):
        expr = _normalized(self.homogenize(function.body), extrema)
        used = set(expr.free_variables())
        variables = tuple(s.name for s in self.tm.varpoints
                          if s.name in used)
        affine = is_affine(expr, variables)
        surrogate = None
        if not affine and len(variables) == 1:
            surrogate = piecewise_linearize(
                expr, self.tm.domain(variables[0]), self.segments,
                variables[0])
        return DefinitionTerm(expr, variables, affine, surrogate)

    def _unbound(self, variables, constraints, objective):
        used = set()
        for constraint in constraints:
            used.update(constraint.guard.free_variables())
            used.update(constraint.relation.free_variables())
        for term in objective:
            for definition in term.definitions:
                used.update(definition.variables)
        return [
            Diagnostic.warning(
                self.tm.symbol(v.name).declaration.span, 'UnboundVarpoint',
                f'Variation point {v.name!r} appears in no constraint or '
                f'property; its binding is arbitrary.')
            for v in variables if v.name not in used
        ]


def lower(tm, ni=None, segments=None):
    """
    Lower an analyzed model into a ConstraintProblem.

    `ni` defaults to the normalization attached by analysis and `segments`
    to the VML_SEGMENTS setting. Raises DiagnosticError for properties
    without a direction.
    """
    if ni is None:
        ni = tm.normalization
    if ni is None:
        ni = compute_normalization(tm)
    if segments is None:
        segments = settings.VML_SEGMENTS
    return _Lowering(tm, ni, segments).run()
