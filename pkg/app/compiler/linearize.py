"""
Chord (secant) linearization of definition functions.
"""

import numpy as np

from django.conf import settings

from core.expressions import ArrayEvaluator, Binary, Unary, VarRef
from core.types import GRID_DECIMALS

from compiler.problem import PiecewiseLinear


def is_affine(expr, variables):
    """True when `expr` is affine in `variables`; other names are constants."""
    names = set(variables)

    def constant(node):
        return not names.intersection(node.free_variables())

    def affine(node):
        if constant(node) or isinstance(node, VarRef):
            return True
        if isinstance(node, Unary) and node.op == '-':
            return affine(node.operand)
        if isinstance(node, Binary):
            if node.op in ('+', '-'):
                return affine(node.left) and affine(node.right)
            if node.op == '*':
                return (constant(node.left) and affine(node.right)
                        or affine(node.left) and constant(node.right))
            if node.op == '/':
                return affine(node.left) and constant(node.right)
        return False

    return affine(expr)


def breakpoints(domain, segments):
    """
    `segments` + 1 equally spaced points spanning `domain`.

    Domains with no more points than that use every point, which makes
    the surrogate exact.
    """
    grid = domain.as_array()
    if len(grid) <= segments + 1:
        return grid
    return np.round(np.linspace(grid[0], grid[-1], segments + 1),
                    GRID_DECIMALS)


def piecewise_linearize(f, domain, k=None, variable=None):
    """
    Chord interpolation of `f` over `domain` with `k` segments.

    `f` is a unit-free expression over one variable, normally a definition
    function already scaled to [0, 100].
    """
    if k is None:
        k = settings.VML_SEGMENTS
    if k < 1:
        raise ValueError(f'Need at least one segment, got {k}.')
    if variable is None:
        names = f.free_variables()
        if len(names) != 1:
            raise ValueError(
                f'Can only linearize over one variable, got {len(names)}.')
        variable = names[0]
    points = breakpoints(domain, k)
    values = ArrayEvaluator().evaluate(f, {variable: points})
    values = np.broadcast_to(values.astype(float), points.shape)
    return PiecewiseLinear(
        variable,
        tuple(float(b) for b in points),
        tuple(float(v) for v in values),
    )
