"""
Branch-and-bound search and the exhaustive oracle.

Both minimize the same factor tables over the discretized joint domain and
break ties towards the lexicographically smallest binding in declaration
order, so for the same problem and context they return equal Solutions.
"""

import logging
import math
import time

import numpy as np

from django.conf import settings

from core.exceptions import DomainTooLarge

from solver.cost import build_factors, context_env, sum_factors
from solver.propagation import restrict, specialize
from solver.snapshot import make_snapshot
from solver.solution import Solution, SolutionStatus

logger = logging.getLogger(__name__)

BOUND_TOLERANCE = 1e-9


class BranchAndBound:
    """
    Depth-first search over variation points in declaration order.

    A node's bound is the cost of the factors it completes plus, for
    every factor still open, the smallest entry allowed by the domain
    masks. Children are visited best bound first and pruned once their
    bound exceeds the incumbent.
    """

    def __init__(self, cp, env, factors, masks, checks):
        self.names = cp.variable_names
        self.env = env
        self.grids = [v.domain.as_array() for v in cp.variables]
        self.allowed = [np.flatnonzero(mask) for mask in masks]
        self.factors = factors
        depth = len(self.names)
        self.completing = [
            [k for k, f in enumerate(factors)
             if f.positions and f.positions[-1] == d]
            for d in range(depth)
        ]
        self.checks_at = [
            [c for c in checks if c.positions[-1] == d] for d in range(depth)
        ]
        self.constants = {k: float(f.table) for k, f in enumerate(factors)
                          if not f.positions}
        optimistic = {
            k: float(f.table[np.ix_(*(self.allowed[p] for p in f.positions))]
                     .min())
            for k, f in enumerate(factors) if f.positions
        }
        self.remaining = [
            sum(value for k, value in optimistic.items()
                if factors[k].positions[-1] > d)
            for d in range(depth)
        ]
        self.best = None
        self.best_value = math.inf
        self.nodes = 0

    def run(self):
        self._descend(0, [], dict(self.constants))
        return self.best, self.best_value

    def _candidates(self, depth, assignment):
        indices = self.allowed[depth]
        if self.checks_at[depth] and len(indices):
            env = dict(self.env)
            for position, index in enumerate(assignment):
                env[self.names[position]] = self.grids[position][index]
            env[self.names[depth]] = self.grids[depth][indices]
            keep = np.ones(len(indices), dtype=bool)
            for check in self.checks_at[depth]:
                keep &= np.broadcast_to(check.holds(env), keep.shape)
            indices = indices[keep]
        return indices

    def _contributions(self, depth, assignment, indices):
        vectors = {}
        for k in self.completing[depth]:
            factor = self.factors[k]
            key = tuple(indices if p == depth else assignment[p]
                        for p in factor.positions)
            vectors[k] = factor.table[key]
        return vectors

    def _leaf_totals(self, completed, vectors, count):
        # same summation order as sum_factors
        total = 0.0
        for k in range(len(self.factors)):
            total = total + (vectors[k] if k in vectors else completed[k])
        return np.broadcast_to(total, (count,))

    def _descend(self, depth, assignment, completed):
        indices = self._candidates(depth, assignment)
        self.nodes += len(indices)
        if not len(indices):
            return
        vectors = self._contributions(depth, assignment, indices)
        if depth == len(self.names) - 1:
            totals = self._leaf_totals(completed, vectors, len(indices))
            position = int(np.argmin(totals))
            value = float(totals[position])
            candidate = assignment + [int(indices[position])]
            if value < self.best_value or (
                    value == self.best_value and candidate < self.best):
                self.best, self.best_value = candidate, value
            return
        bounds = sum(completed.values()) + sum(vectors.values()) \
            + self.remaining[depth]
        bounds = np.broadcast_to(bounds, indices.shape)
        for i in np.argsort(bounds, kind='stable'):
            if bounds[i] > self.best_value + BOUND_TOLERANCE:
                break
            done = dict(completed)
            done.update((k, float(vector[i]))
                        for k, vector in vectors.items())
            self._descend(depth + 1, assignment + [int(indices[i])], done)


def _solution(cp, snapshot, triggered, indices, factors, nodes, started):
    elapsed = time.perf_counter() - started
    if indices is None:
        logger.info('%s is infeasible; triggered rules: %s.', cp.name,
                    ', '.join(triggered) or 'none')
        return Solution(cp.name, SolutionStatus.INFEASIBLE,
                        triggered=triggered, context=dict(snapshot.values),
                        clamped=snapshot.clamped, nodes=nodes,
                        elapsed=elapsed)
    bindings = {v.name: v.domain.values[index]
                for v, index in zip(cp.variables, indices)}
    solution = Solution(
        cp.name, SolutionStatus.OPTIMAL, bindings,
        objective=sum_factors(factors, indices),
        triggered=triggered, context=dict(snapshot.values),
        clamped=snapshot.clamped, labels=cp.labels(bindings),
        nodes=nodes, elapsed=elapsed,
    )
    logger.debug('Solved %s in %.4f s over %d nodes: %s.', cp.name,
                 elapsed, nodes, solution)
    return solution


def solve(cp, ctx, exact=None):
    """
    Optimal bindings of `cp` for context `ctx` by branch and bound.

    Rules decided by the context are applied as domain restrictions
    before the search. Infeasibility is reported through the status.
    """
    started = time.perf_counter()
    snapshot = make_snapshot(cp, ctx)
    env = context_env(cp, snapshot)
    checks, triggered = specialize(cp, env)
    masks, checks, feasible = restrict(cp, env, checks)
    factors = build_factors(cp, env, exact)
    if not feasible:
        return _solution(cp, snapshot, triggered, None, factors, 0, started)
    if not cp.variables:
        return _solution(cp, snapshot, triggered, [], factors, 1, started)
    search = BranchAndBound(cp, env, factors, masks, checks)
    best, _ = search.run()
    return _solution(cp, snapshot, triggered, best, factors, search.nodes,
                     started)


def brute_force(cp, ctx, exact=None, limit=None):
    """
    Optimal bindings of `cp` for `ctx` by evaluating the whole joint grid.

    Raises DomainTooLarge when the grid has more points than `limit`
    (default VML_BRUTE_FORCE_LIMIT).
    """
    if limit is None:
        limit = settings.VML_BRUTE_FORCE_LIMIT
    sizes = tuple(len(v.domain) for v in cp.variables)
    points = math.prod(sizes)
    if points > limit:
        raise DomainTooLarge(
            f'{cp.name} has {points} joint grid points, more than the '
            f'limit of {limit}.')
    started = time.perf_counter()
    snapshot = make_snapshot(cp, ctx)
    env = context_env(cp, snapshot)
    checks, triggered = specialize(cp, env)
    mesh = np.meshgrid(*(v.domain.as_array() for v in cp.variables),
                       indexing='ij', sparse=True)
    grid_env = {**env, **dict(zip(cp.variable_names, mesh))}
    feasible = np.ones(sizes, dtype=bool)
    for check in checks:
        feasible &= np.broadcast_to(check.holds(grid_env), sizes)
    factors = build_factors(cp, env, exact)
    totals = np.zeros(sizes)
    for factor in factors:
        shape = [1] * len(sizes)
        for position in factor.positions:
            shape[position] = sizes[position]
        totals = totals + factor.table.reshape(shape)
    totals = np.where(feasible, totals, np.inf)
    flat = int(np.argmin(totals))
    indices = None
    if np.isfinite(totals.flat[flat]):
        indices = [int(i) for i in np.unravel_index(flat, sizes)]
    return _solution(cp, snapshot, triggered, indices, factors, points,
                     started)
