"""
Solver results.
"""

from dataclasses import dataclass, field
from enum import Enum


class SolutionStatus(str, Enum):
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'


@dataclass(frozen=True)
class Solution:
    """
    Optimal variation point bindings for one context snapshot.

    `bindings` holds domain values (enum codes for enums) in declaration
    order; `objective` is None when the problem is infeasible. `triggered`
    names the rules whose guard held in the context. `nodes` and `elapsed`
    are search statistics and take no part in equality.
    """

    model: str
    status: SolutionStatus
    bindings: dict = field(default_factory=dict)
    objective: float = None
    triggered: tuple = ()
    context: dict = field(default_factory=dict)
    clamped: tuple = ()
    labels: dict = field(default_factory=dict, compare=False)
    nodes: int = field(default=0, compare=False)
    elapsed: float = field(default=0.0, compare=False)

    @property
    def is_optimal(self):
        return self.status is SolutionStatus.OPTIMAL

    def __str__(self):
        if not self.is_optimal:
            rules = ', '.join(self.triggered) or 'none'
            return f'{self.model}: infeasible (triggered rules: {rules})'
        bindings = ', '.join(f'{name}={value}'
                             for name, value in self.labels.items())
        return f'{self.model}: {bindings} (objective {self.objective:.6g})'
