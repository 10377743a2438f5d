"""
Name resolution and type checking of parsed models.
"""

import logging
from dataclasses import dataclass, replace
from graphlib import CycleError, TopologicalSorter

from core.diagnostics import Diagnostic, has_errors, sort_diagnostics
from core.exceptions import DiagnosticError, DimensionMismatch
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
from core.types import NumericType

from analysis.symbols import (
    BOOLEAN,
    ERROR,
    NUMBER,
    Symbol,
    SymbolKind,
    ValueKind,
    value_type_of,
)
from analysis.typed_model import Annotation, TypedModel, model_expressions
from analysis.units import expression_unit
from language.nodes import (
    ContextDecl,
    GeneralVarDecl,
    Implication,
    PropertyDecl,
    VarpointDecl,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Role:
    """Where an expression appears and which variables it may read."""

    label: str
    allowed: frozenset


CONTEXT, VARPOINT, GENERAL = (SymbolKind.CONTEXT, SymbolKind.VARPOINT,
                              SymbolKind.GENERAL)
RULE_CONDITION = Role('rule condition', frozenset({CONTEXT, GENERAL}))
RULE_CONSEQUENCE = Role('rule consequence', frozenset({VARPOINT}))
GENERAL_VAR = Role('general var', frozenset({CONTEXT, GENERAL}))
GUARD = Role('varpoint guard', frozenset({CONTEXT, GENERAL, VARPOINT}))
VARPOINT_CONSTRAINT = Role('varpoint constraint', frozenset({VARPOINT}))
PRIORITY = Role('priority function', frozenset({CONTEXT}))
DEFINITION = Role('definition function', frozenset({VARPOINT}))

SYMBOL_KINDS = {
    ContextDecl: CONTEXT,
    VarpointDecl: VARPOINT,
    GeneralVarDecl: GENERAL,
    PropertyDecl: SymbolKind.PROPERTY,
}


class _Checker:

    def __init__(self, model, name):
        self.model = model
        self.name = name
        self.diagnostics = []
        self.types = {}
        self.symbols = {}
        self.node_types = {}

    def _error(self, span, code, message):
        self.diagnostics.append(Diagnostic.error(span, code, message))

    def run(self):
        self._declare_types()
        self._declare_variables()
        order = self._order_general_vars()
        for name in order:
            self._check_general_var(self.symbols[name])
        for declaration in self.model.varpoints:
            self._check_varpoint(declaration)
        for declaration in self.model.properties:
            self._check_property(declaration)
        self._check_rules()
        return TypedModel(
            name=self.name,
            model=self.model,
            symbols=self.symbols,
            types=self.types,
            general_order=tuple(order),
            annotations=self._annotations(),
        )

    def _annotations(self):
        units = {}
        for _, expr in model_expressions(self.model):
            try:
                expression_unit(expr, self._unit_of, units)
            except DimensionMismatch:
                # Reported by check_units; nodes below the clash keep units.
                continue
        return {key: Annotation(value_type, units.get(key))
                for key, value_type in self.node_types.items()}

    # Declarations

    def _declare_types(self):
        for definition in self.model.types:
            if definition.name in self.types:
                self._error(definition.span, 'DuplicateDeclaration',
                            f'Type {definition.name!r} is declared twice.')
                continue
            self.types[definition.name] = definition.type
            if not definition.is_enum:
                continue
            literal_type = value_type_of(definition.type)
            for literal in definition.type.literals:
                if literal.name in self.symbols:
                    self._error(
                        definition.span, 'DuplicateDeclaration',
                        f'Enum literal {literal.name!r} is declared twice.')
                    continue
                self.symbols[literal.name] = Symbol(
                    literal.name, SymbolKind.ENUM_LITERAL, literal_type,
                    type=definition.type, declaration=literal)

    def _declare_variables(self):
        for declaration in self.model.variables:
            if declaration.name in self.symbols:
                self._error(declaration.span, 'DuplicateDeclaration',
                            f'{declaration.name!r} is declared twice.')
                continue
            kind = SYMBOL_KINDS[type(declaration)]
            value_type, t, unit = None, None, None
            if declaration.type_name is not None:
                t = self.types.get(declaration.type_name)
                if t is None:
                    self._error(
                        declaration.span, 'UndeclaredType',
                        f'Type {declaration.type_name!r} is not declared.')
                    value_type = ERROR
                else:
                    value_type = value_type_of(t)
                    if isinstance(t, NumericType) and t.unit is not None:
                        unit = t.unit_info
            self.symbols[declaration.name] = Symbol(
                declaration.name, kind, value_type, type=t, unit=unit,
                declaration=declaration)
        rule_names = set()
        for rule in self.model.rules:
            if rule.name in rule_names:
                self._error(rule.span, 'DuplicateDeclaration',
                            f'Rule {rule.name!r} is declared twice.')
            rule_names.add(rule.name)

    def _order_general_vars(self):
        declared = [s for s in self.symbols.values() if s.kind is GENERAL]
        sorter = TopologicalSorter()
        for symbol in declared:
            dependencies = [
                name for name in symbol.declaration.expr.free_variables()
                if name in self.symbols
                and self.symbols[name].kind is GENERAL
            ]
            sorter.add(symbol.name, *dependencies)
        try:
            return list(sorter.static_order())
        except CycleError as error:
            cycle = error.args[1]
            first = self.symbols[cycle[0]]
            self._error(first.declaration.span, 'CyclicDefinition',
                        'General vars depend on each other: '
                        + ' -> '.join(cycle) + '.')
            for name in set(cycle):
                self.symbols[name] = replace(self.symbols[name],
                                             value_type=ERROR)
            return [symbol.name for symbol in declared]

    # Checks per declaration

    def _check_general_var(self, symbol):
        declaration = symbol.declaration
        value_type = self._type(declaration.expr, GENERAL_VAR)
        if symbol.value_type is not None:
            self._expect(value_type, symbol.value_type, declaration.expr,
                         f'{symbol.value_type} value for {symbol.name!r}')
            return
        try:
            unit = expression_unit(declaration.expr, self._unit_of)
        except DimensionMismatch:
            unit = None
        self.symbols[symbol.name] = replace(symbol, value_type=value_type,
                                            unit=unit)

    def _check_varpoint(self, declaration):
        for constraint in declaration.constraints:
            if isinstance(constraint, Implication):
                self._expect(self._type(constraint.guard, GUARD), BOOLEAN,
                             constraint.guard, 'boolean guard')
                consequence = constraint.consequence
            else:
                consequence = constraint.relation
            self._expect(self._type(consequence, VARPOINT_CONSTRAINT),
                         BOOLEAN, consequence, 'boolean constraint')

    def _check_property(self, declaration):
        groups = ((declaration.priorities, PRIORITY, CONTEXT),
                  (declaration.definitions, DEFINITION, VARPOINT))
        for functions, role, kind in groups:
            for function in functions:
                self._check_function(function, role, kind)

    def _check_function(self, function, role, kind):
        params = set()
        for param in function.params:
            symbol = self.symbols.get(param)
            if symbol is None:
                self._error(function.span, 'UndeclaredVariable',
                            f'Variable {param!r} is not declared.')
            elif symbol.kind is not kind:
                self._error(
                    function.span, 'TaxonomyViolation',
                    f'A {role.label} takes {kind.value} variables; '
                    f'{param!r} is a {symbol.kind.value}.')
            params.add(param)
        value_type = self._type(function.body, role, exempt=params)
        self._expect(value_type, NUMBER, function.body, 'numeric function')
        for name in function.body.free_variables():
            symbol = self.symbols.get(name)
            # Other kinds were reported as taxonomy violations already.
            if name in params or symbol is None or symbol.kind is not kind:
                continue
            self._error(
                function.body.span, 'UndeclaredVariable',
                f'{name!r} is not a parameter of '
                f"{function.name}({', '.join(function.params)}).")

    def _check_rules(self):
        for rule in self.model.rules:
            self._expect(self._type(rule.condition, RULE_CONDITION), BOOLEAN,
                         rule.condition, 'boolean condition')
            self._expect(self._type(rule.consequence, RULE_CONSEQUENCE),
                         BOOLEAN, rule.consequence, 'boolean consequence')
            constrained = [
                name for name in rule.consequence.free_variables()
                if name in self.symbols
                and self.symbols[name].kind is VARPOINT
            ]
            if not constrained:
                self._error(
                    rule.consequence.span or rule.span, 'TaxonomyViolation',
                    f'Rule {rule.name!r} must constrain at least one '
                    f'variation point.')

    # Expressions

    def _unit_of(self, name):
        symbol = self.symbols.get(name)
        return symbol.unit if symbol is not None else None

    def _expect(self, actual, expected, expr, what):
        if actual.is_error or expected.is_error:
            return
        if expected is NUMBER and actual.is_arithmetic:
            return
        if actual != expected:
            self._error(expr.span, 'TypeMismatch',
                        f'Expected a {what}, got {actual}.')

    def _type(self, expr, role, exempt=frozenset()):
        value_type = self._infer(expr, role, exempt)
        self.node_types[id(expr)] = value_type
        return value_type

    def _infer(self, expr, role, exempt):
        if isinstance(expr, Literal):
            return BOOLEAN if isinstance(expr.value, bool) else NUMBER
        if isinstance(expr, VarRef):
            return self._reference(expr, role, exempt)
        if isinstance(expr, Unary):
            operand = self._type(expr.operand, role, exempt)
            if expr.op == '!':
                self._expect(operand, BOOLEAN, expr.operand, 'boolean')
                return ERROR if operand.is_error else BOOLEAN
            self._expect(operand, NUMBER, expr.operand, 'number')
            return ERROR if operand.is_error else NUMBER
        if isinstance(expr, Binary):
            return self._binary(expr, role, exempt)
        if isinstance(expr, Call):
            args = [self._type(arg, role, exempt) for arg in expr.args]
            for arg, value_type in zip(expr.args, args):
                self._expect(value_type, NUMBER, arg, 'number')
            return ERROR if any(a.is_error for a in args) else NUMBER
        if isinstance(expr, Extremum):
            return self._extremum(expr, role, exempt)
        raise TypeError(f'Unknown expression node {expr!r}.')

    def _reference(self, expr, role, exempt):
        symbol = self.symbols.get(expr.name)
        if symbol is None:
            self._error(expr.span, 'UndeclaredVariable',
                        f'Variable {expr.name!r} is not declared.')
            return ERROR
        if symbol.kind is SymbolKind.ENUM_LITERAL:
            return symbol.value_type
        if expr.name not in exempt and symbol.kind not in role.allowed:
            self._error(
                expr.span, 'TaxonomyViolation',
                f'A {role.label} may not reference the '
                f'{symbol.kind.value} {expr.name!r}.')
            return ERROR
        return symbol.value_type or ERROR

    def _binary(self, expr, role, exempt):
        left = self._type(expr.left, role, exempt)
        right = self._type(expr.right, role, exempt)
        if left.is_error or right.is_error:
            return ERROR
        if expr.op in LOGICAL:
            self._expect(left, BOOLEAN, expr.left, 'boolean')
            self._expect(right, BOOLEAN, expr.right, 'boolean')
            return BOOLEAN
        if expr.op in ('=', '!='):
            if BOOLEAN in (left, right) and left != right \
                    or ValueKind.ENUM is left.kind is right.kind \
                    and left != right:
                self._error(expr.span, 'TypeMismatch',
                            f'Cannot compare {left} with {right}.')
            return BOOLEAN
        self._expect(left, NUMBER, expr.left, 'number')
        self._expect(right, NUMBER, expr.right, 'number')
        return BOOLEAN if expr.op in COMPARISONS else NUMBER

    def _extremum(self, expr, role, exempt):
        body = self._type(expr.body, role, exempt)
        self._expect(body, NUMBER, expr.body, 'number')
        variables = [
            name for name in expr.body.free_variables()
            if name in self.symbols
            and self.symbols[name].kind is not SymbolKind.ENUM_LITERAL
        ]
        if len(variables) != 1 \
                or not self.symbols[variables[0]].has_domain:
            self._error(
                expr.span, 'TypeMismatch',
                f'{expr.func}() ranges over an expression of exactly one '
                f'context or variation point.')
            return ERROR
        return ERROR if body.is_error else NUMBER


def check(model, name='model'):
    """Resolve and type-check `model`; returns (TypedModel, diagnostics)."""
    checker = _Checker(model, name)
    tm = checker.run()
    diagnostics = sort_diagnostics(checker.diagnostics)
    logger.debug('Checked model %r: %d diagnostics.', name, len(diagnostics))
    return tm, diagnostics


def resolve_and_typecheck(model, name='model'):
    """Return the TypedModel of `model`; raises DiagnosticError on errors."""
    tm, diagnostics = check(model, name)
    if has_errors(diagnostics):
        raise DiagnosticError(diagnostics)
    return tm
