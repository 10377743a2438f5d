"""
The lowered, solver-ready form of a VML model.

Every expression held here is unit-free: conversion factors are explicit,
range extrema are folded to constants and enum literals are replaced by
their codes, so the built-in solver and the MiniZinc emitter read the same
trees.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from core.expressions import Expr, Literal
from core.types import BoolType, EnumType, discretize

TRUE = Literal(True)


class ConstraintKind(str, Enum):
    RULE = 'rule'
    IMPLICATION = 'implication'
    INVARIANT = 'invariant'


@dataclass(frozen=True)
class Variable:
    """A named value with a declared type; values use the type's unit."""

    name: str
    type: object
    unit: object = None

    @property
    def domain(self):
        return discretize(self.type)

    @property
    def is_enum(self):
        return isinstance(self.type, EnumType)

    @property
    def is_boolean(self):
        return isinstance(self.type, BoolType)

    @property
    def is_integral(self):
        """True when every value of the domain is an integer."""
        if self.is_enum or self.is_boolean:
            return True
        return self.type.is_integral

    def label(self, value):
        """Enum literal name of `value`; other values are returned as is."""
        return self.domain.label(value)


class Parameter(Variable):
    """A context variable; fixed by the snapshot before solving."""


class DecisionVariable(Variable):
    """A variation point; bound by the solver."""


@dataclass(frozen=True)
class GeneralVar:
    """A derived value over parameters, evaluated in declaration order."""

    name: str
    expr: Expr
    unit: object = None
    kind: str = 'number'


@dataclass(frozen=True)
class Constraint:
    """`guard => relation`; invariants carry the guard `true`."""

    name: str
    guard: Expr
    relation: Expr
    kind: ConstraintKind

    @property
    def is_unconditional(self):
        return self.guard == TRUE


@dataclass(frozen=True)
class PiecewiseLinear:
    """
    Chords through (breakpoints[j], values[j]) over one decision variable.

    Segment j covers [b_j, b_j+1); the last segment is closed.
    """

    variable: str
    breakpoints: tuple
    values: tuple

    @property
    def segments(self):
        return len(self.breakpoints) - 1

    @property
    def slopes(self):
        return tuple(float(s) for s in
                     np.diff(self.values) / np.diff(self.breakpoints))

    @property
    def intercepts(self):
        slopes = np.asarray(self.slopes)
        starts = np.asarray(self.breakpoints[:-1])
        return tuple(float(c) for c in
                     np.asarray(self.values[:-1]) - slopes * starts)

    def segment_of(self, x):
        """Index of the segment holding each `x`."""
        positions = np.searchsorted(self.breakpoints, x, side='right') - 1
        return np.clip(positions, 0, self.segments - 1)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        segment = self.segment_of(x)
        return np.asarray(self.slopes)[segment] * x \
            + np.asarray(self.intercepts)[segment]

    def max_error(self, grid, exact):
        """Largest absolute gap to `exact` values over `grid`."""
        return float(np.max(np.abs(self.evaluate(grid) - np.asarray(exact))))


@dataclass(frozen=True)
class DefinitionTerm:
    """
    One definition function, normalized to [0, 100].

    `surrogate` is set for definitions that are nonlinear in a single
    decision variable.
    """

    expr: Expr
    variables: tuple
    affine: bool
    surrogate: PiecewiseLinear = None

    @property
    def is_linearized(self):
        return self.affine or self.surrogate is not None


@dataclass(frozen=True)
class ObjectiveTerm:
    """`sign * weight(ctx) * mean(definitions)(vp)` for one property."""

    property: str
    sign: int
    weight: Expr
    definitions: tuple


@dataclass(frozen=True, eq=False)
class ConstraintProblem:
    """
    Parameters, decision variables, constraints and a weighted objective.

    Compared and hashed by identity, so tables derived from a problem can
    be cached per problem.
    """

    name: str
    parameters: tuple
    general_vars: tuple
    variables: tuple
    constraints: tuple
    objective: tuple
    segments: int
    warnings: tuple = ()

    def parameter(self, name):
        return _find(self.parameters, name)

    def variable(self, name):
        return _find(self.variables, name)

    @property
    def parameter_names(self):
        return tuple(p.name for p in self.parameters)

    @property
    def variable_names(self):
        return tuple(v.name for v in self.variables)

    @property
    def rules(self):
        return tuple(c for c in self.constraints
                     if c.kind is ConstraintKind.RULE)

    def labels(self, bindings):
        """Bindings with enum codes replaced by literal names."""
        return {name: self.variable(name).label(value)
                for name, value in bindings.items()}


def _find(items, name):
    for item in items:
        if item.name == name:
            return item
    raise KeyError(name)
