"""
The weighted cost function of a constraint problem as factor tables.

Each definition function becomes one factor: a table over the joint domain
of the variation points it reads, scaled by the signed weight of its
property. The cost of a binding is the sum of its factor entries, always
added in the same order so that every search strategy reports bit-equal
objectives.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from django.conf import settings

from core.exceptions import IncompleteBinding
from core.expressions import ArrayEvaluator, Evaluator

from solver.snapshot import coerce_value, make_snapshot


@dataclass(frozen=True, eq=False)
class Factor:
    """`table` is indexed by the domain positions of `positions`."""

    positions: tuple
    table: np.ndarray


def _exact(exact):
    return settings.VML_EXACT_OBJECTIVE if exact is None else exact


@lru_cache(maxsize=256)
def definition_table(cp, term_index, definition_index, exact):
    """Normalized values of one definition over its joint domain."""
    definition = cp.objective[term_index].definitions[definition_index]
    axes = [cp.variable(name).domain.as_array()
            for name in definition.variables]
    if definition.surrogate is not None and not exact:
        table = definition.surrogate.evaluate(axes[0])
    else:
        mesh = np.meshgrid(*axes, indexing='ij', sparse=True)
        values = ArrayEvaluator().evaluate(
            definition.expr, dict(zip(definition.variables, mesh)))
        table = np.broadcast_to(values.astype(float),
                                tuple(len(axis) for axis in axes))
    table = np.array(table, dtype=float)
    table.setflags(write=False)
    return table


def context_env(cp, snapshot):
    """Parameter values followed by the general vars derived from them."""
    evaluator = Evaluator()
    env = dict(snapshot.values)
    for general in cp.general_vars:
        env[general.name] = evaluator.evaluate(general.expr, env)
    return env


def term_weights(cp, env):
    evaluator = Evaluator()
    return tuple(float(evaluator.evaluate(term.weight, env))
                 for term in cp.objective)


def build_factors(cp, env, exact=None):
    """Factors of the cost function in term then definition order."""
    exact = _exact(exact)
    names = cp.variable_names
    factors = []
    for i, (term, weight) in enumerate(zip(cp.objective,
                                           term_weights(cp, env))):
        coefficient = term.sign * weight / len(term.definitions)
        for j, definition in enumerate(term.definitions):
            factors.append(Factor(
                tuple(names.index(name) for name in definition.variables),
                coefficient * definition_table(cp, i, j, exact),
            ))
    return factors


def sum_factors(factors, indices):
    """Cost of the binding at domain positions `indices`."""
    total = 0.0
    for factor in factors:
        key = tuple(indices[position] for position in factor.positions)
        total = total + float(factor.table[key])
    return total


def binding_indices(cp, vp):
    """Domain positions of the bindings `vp`, in declaration order."""
    missing = [name for name in cp.variable_names if name not in vp]
    if missing:
        raise IncompleteBinding(
            f'Missing variation point values for {", ".join(missing)}.')
    indices = []
    for variable in cp.variables:
        value, _ = coerce_value(variable, vp[variable.name])
        indices.append(variable.domain.index_of(value))
    return indices


def evaluate_cost(cp, ctx, vp, exact=None):
    """
    Value of the weighted cost function for context `ctx` and bindings `vp`.

    Uses the chord surrogates of nonlinear definitions unless `exact` (or
    the VML_EXACT_OBJECTIVE setting) asks for the exact functions.
    """
    env = context_env(cp, make_snapshot(cp, ctx))
    return sum_factors(build_factors(cp, env, exact),
                       binding_indices(cp, vp))
