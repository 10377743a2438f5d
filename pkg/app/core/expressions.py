"""
Expression trees and their evaluation.

Nodes are immutable; their `span` does not take part in equality so that
structurally identical trees compare equal wherever they were parsed from.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from core.diagnostics import Span
from core.exceptions import (
    DivisionByZero,
    UnboundVariable,
    VMLError,
)
from core.units import combine, convert_unit

ARITHMETIC = ('+', '-', '*', '/')
COMPARISONS = ('<', '<=', '>', '>=', '=', '!=')
LOGICAL = ('&', '|')
FUNCTIONS = {'exp': 1, 'abs': 1, 'min': 2, 'max': 2}
EXTREMA = ('max', 'min')


class Expr:
    """Base class of expression nodes."""

    def children(self):
        return ()

    def walk(self):
        """Yield this node and all its descendants, parents first."""
        yield self
        for child in self.children():
            yield from child.walk()

    def free_variables(self):
        """Names referenced by the expression, in first-use order."""
        seen = []
        for node in self.walk():
            if isinstance(node, VarRef) and node.name not in seen:
                seen.append(node.name)
        return tuple(seen)


@dataclass(frozen=True)
class Literal(Expr):
    value: object
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VarRef(Expr):
    """A reference to a variable or an enum literal."""

    name: str
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Unary(Expr):
    op: str
    operand: Expr
    span: Span = field(default=None, compare=False, repr=False)

    def children(self):
        return (self.operand,)


@dataclass(frozen=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr
    span: Span = field(default=None, compare=False, repr=False)

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Call(Expr):
    func: str
    args: tuple
    span: Span = field(default=None, compare=False, repr=False)

    def children(self):
        return self.args


@dataclass(frozen=True)
class Extremum(Expr):
    """`max(body)` / `min(body)` over the domain of the body's one variable."""

    func: str
    body: Expr
    span: Span = field(default=None, compare=False, repr=False)

    def children(self):
        return (self.body,)


class Evaluator:
    """
    Evaluates expressions against an environment of variable values.

    `domains` maps variable names to Domains (needed by range-extremum
    calls), `units` maps names to Units for homogenization, and `constants`
    maps enum literal names to their codes. Values in the environment are
    expressed in the declared unit of their variable.
    """

    def __init__(self, domains=None, units=None, constants=None):
        self.domains = domains or {}
        self.units = units or {}
        self.constants = constants or {}
        self._extrema = {}

    def evaluate(self, expr, env):
        return self.quantity(expr, env)[0]

    def quantity(self, expr, env):
        """Evaluate to a (value, unit) pair; unit is None when untagged."""
        return self._eval(expr, env)

    def _eval(self, expr, env):
        if isinstance(expr, Literal):
            return expr.value, None
        if isinstance(expr, VarRef):
            if expr.name in env:
                return env[expr.name], self.units.get(expr.name)
            if expr.name in self.constants:
                return self.constants[expr.name], None
            raise UnboundVariable(expr.name)
        if isinstance(expr, Unary):
            value, unit = self._eval(expr.operand, env)
            if expr.op == '!':
                return self._negate(value), None
            return -value, unit
        if isinstance(expr, Binary):
            return self._binary(expr, env)
        if isinstance(expr, Call):
            return self._call(expr, env)
        if isinstance(expr, Extremum):
            return self._extremum(expr), None
        raise TypeError(f'Unknown expression node {expr!r}.')

    def _negate(self, value):
        return not value

    def _logical(self, expr, env):
        left = bool(self._eval(expr.left, env)[0])
        if (expr.op == '&') != left:  # short-circuit
            return left
        return bool(self._eval(expr.right, env)[0])

    def _apply(self, op, left, right):
        return apply_binary(op, left, right)

    def _function(self, func, *values):
        if func == 'exp':
            return math.exp(values[0])
        if func == 'abs':
            return abs(values[0])
        return max(values) if func == 'max' else min(values)

    def _homogenized(self, op, left, left_unit, right, right_unit):
        combination = combine(op, left_unit, right_unit)
        if combination.left is not None:
            left = convert_unit(left, left_unit, combination.left)
        if combination.right is not None:
            right = convert_unit(right, right_unit, combination.right)
        return left, right, combination.result

    def _binary(self, expr, env):
        if expr.op in LOGICAL:
            return self._logical(expr, env), None
        left, left_unit = self._eval(expr.left, env)
        right, right_unit = self._eval(expr.right, env)
        left, right, unit = self._homogenized(
            expr.op, left, left_unit, right, right_unit)
        return self._apply(expr.op, left, right), unit

    def _call(self, expr, env):
        evaluated = [self._eval(arg, env) for arg in expr.args]
        if expr.func == 'exp':
            return self._function('exp', evaluated[0][0]), None
        if expr.func == 'abs':
            return self._function('abs', evaluated[0][0]), evaluated[0][1]
        (left, left_unit), (right, right_unit) = evaluated
        left, right, unit = self._homogenized(
            expr.func, left, left_unit, right, right_unit)
        return self._function(expr.func, left, right), unit

    def _extremum_variable(self, expr):
        variables = [v for v in expr.body.free_variables()
                     if v not in self.constants]
        if len(variables) != 1:
            raise VMLError(
                f'{expr.func}() needs an expression over exactly one '
                f'variable, got {len(variables)}.'
            )
        if variables[0] not in self.domains:
            raise UnboundVariable(variables[0])
        return variables[0]

    def _extremum(self, expr):
        if expr in self._extrema:
            return self._extrema[expr]
        name = self._extremum_variable(expr)
        values = [self._eval(expr.body, {name: v})[0]
                  for v in self.domains[name]]
        result = max(values) if expr.func == 'max' else min(values)
        self._extrema[expr] = result
        return result


class ArrayEvaluator(Evaluator):
    """
    Evaluates an expression over numpy arrays in one pass.

    Environment values may be arrays of any broadcastable shapes (for
    instance a sparse meshgrid), so one call covers a whole joint grid.
    """

    def evaluate(self, expr, env):
        return np.asarray(super().evaluate(expr, env))

    def _negate(self, value):
        return np.logical_not(value)

    def _logical(self, expr, env):
        left = self._eval(expr.left, env)[0]
        right = self._eval(expr.right, env)[0]
        if expr.op == '&':
            return np.logical_and(left, right)
        return np.logical_or(left, right)

    def _apply(self, op, left, right):
        if op == '/':
            if np.any(np.asarray(right) == 0):
                raise DivisionByZero('Division by zero.')
            return np.true_divide(left, right)
        return apply_binary(op, left, right)

    def _function(self, func, *values):
        if func == 'exp':
            return np.exp(values[0])
        if func == 'abs':
            return np.abs(values[0])
        pick = np.maximum if func == 'max' else np.minimum
        return pick(*values)

    def _extremum(self, expr):
        if expr in self._extrema:
            return self._extrema[expr]
        name = self._extremum_variable(expr)
        grid = self.domains[name].as_array()
        values = self.evaluate(expr.body, {name: grid})
        result = float(values.max() if expr.func == 'max' else values.min())
        self._extrema[expr] = result
        return result


def apply_binary(op, left, right):
    """Apply an arithmetic or comparison operator to plain values."""
    if op == '+':
        return left + right
    if op == '-':
        return left - right
    if op == '*':
        return left * right
    if op == '/':
        if right == 0:
            raise DivisionByZero('Division by zero.')
        return left / right
    if op == '<':
        return left < right
    if op == '<=':
        return left <= right
    if op == '>':
        return left > right
    if op == '>=':
        return left >= right
    if op == '=':
        return left == right
    if op == '!=':
        return left != right
    raise ValueError(f'Unknown operator {op!r}.')


def eval_expr(expr, env, domains=None, units=None, constants=None):
    """Evaluate `expr` in `env`; see Evaluator for the optional scopes."""
    return Evaluator(domains, units, constants).evaluate(expr, env)
