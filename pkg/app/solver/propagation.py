"""
Specialization of constraints to one context.
"""

from dataclasses import dataclass

import numpy as np

from core.expressions import ArrayEvaluator, Evaluator

from compiler.problem import ConstraintKind


@dataclass(frozen=True)
class Check:
    """
    A constraint still open once the context is fixed.

    `guard` is None when the context alone decided it held. `positions`
    are the declaration positions of the variation points it reads.
    """

    name: str
    guard: object
    relation: object
    positions: tuple

    def holds(self, env):
        """Boolean array of where the constraint is satisfied in `env`."""
        evaluator = ArrayEvaluator()
        relation = evaluator.evaluate(self.relation, env).astype(bool)
        if self.guard is None:
            return relation
        guard = evaluator.evaluate(self.guard, env).astype(bool)
        return np.logical_or(np.logical_not(guard), relation)


def _positions(expr, names):
    return {names.index(name) for name in expr.free_variables()
            if name in names}


def specialize(cp, env):
    """
    Decide every guard that reads only the context.

    Returns the open checks in declaration order and the names of the
    rules whose guard held.
    """
    names = cp.variable_names
    evaluator = Evaluator()
    checks, triggered = [], []
    for constraint in cp.constraints:
        guard = constraint.guard
        guard_positions = _positions(guard, names)
        if not guard_positions:
            if not evaluator.evaluate(guard, env):
                continue
            if constraint.kind is ConstraintKind.RULE:
                triggered.append(constraint.name)
            guard = None
        positions = guard_positions | _positions(constraint.relation, names)
        checks.append(Check(constraint.name, guard, constraint.relation,
                            tuple(sorted(positions))))
    return checks, tuple(triggered)


def restrict(cp, env, checks):
    """
    Apply the checks over at most one variation point as domain masks.

    Returns (masks, remaining checks, feasible). A check over no variation
    point that fails makes the problem infeasible outright.
    """
    masks = [np.ones(len(v.domain), dtype=bool) for v in cp.variables]
    remaining = []
    for check in checks:
        if not check.positions:
            if not bool(check.holds(env)):
                return masks, remaining, False
        elif len(check.positions) == 1:
            position = check.positions[0]
            variable = cp.variables[position]
            holds = check.holds({**env,
                                 variable.name: variable.domain.as_array()})
            masks[position] &= np.broadcast_to(holds, masks[position].shape)
        else:
            remaining.append(check)
    return masks, remaining, all(mask.any() for mask in masks)
