"""
Context sweeps: one solve per value of a varying context.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from core.types import GRID_DECIMALS, Domain

from solver.search import solve
from solver.snapshot import ContextSnapshot


@dataclass(frozen=True)
class SweepRow:
    value: object
    solution: object


def sweep_grid(start, stop, step):
    """Values `start, start + step, ...` up to and including `stop`."""
    if step <= 0:
        raise ValueError('The sweep step must be positive.')
    if stop < start:
        raise ValueError('The sweep must end at or after its start.')
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    values = np.round(start + step * np.arange(count), GRID_DECIMALS)
    return Domain(tuple(float(v) for v in values), precision=step)


def sweep(cp, varying, grid=None, fixed=None, exact=None, method=solve):
    """
    Solve `cp` once for each value of context `varying` over `grid`.

    `grid` defaults to the domain of the context; `fixed` gives the other
    context values. Returns SweepRows in grid order.
    """
    parameter = cp.parameter(varying)
    if grid is None:
        grid = parameter.domain
    if isinstance(fixed, ContextSnapshot):
        fixed = fixed.values
    context = dict(fixed or {})
    rows = []
    for value in grid:
        context[varying] = value
        rows.append(SweepRow(value, method(cp, context, exact=exact)))
    return rows


def sweep_frame(cp, rows):
    """Table `context_value,<varpoints...>,objective,status` of a sweep."""
    columns = ['context_value', *cp.variable_names, 'objective', 'status']
    records = []
    for row in rows:
        solution = row.solution
        record = {'context_value': row.value}
        for name in cp.variable_names:
            record[name] = solution.labels.get(name)
        record['objective'] = solution.objective
        record['status'] = solution.status.value
        records.append(record)
    return pd.DataFrame.from_records(records, columns=columns)


def write_sweep_csv(cp, rows, stream):
    sweep_frame(cp, rows).to_csv(stream, index=False, lineterminator='\n')
