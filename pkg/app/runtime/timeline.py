"""
The record of solver invocations during a run.
"""

from dataclasses import dataclass

import pandas as pd

COLUMNS = ['tick', 'trigger', 'model', 'bindings', 'objective', 'status']


@dataclass(frozen=True)
class TimelineRow:
    tick: int
    trigger: str
    model: str
    bindings: dict
    objective: float
    status: str

    @property
    def bindings_text(self):
        """`name=value` pairs joined by `;`, enums by literal name."""
        return ';'.join(f'{name}={value}'
                        for name, value in self.bindings.items())


class BindingTimeline:
    """One row per solver invocation, in invocation order."""

    def __init__(self):
        self.rows = []

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, index):
        return self.rows[index]

    def record(self, tick, trigger, solution):
        row = TimelineRow(tick, trigger, solution.model,
                          dict(solution.labels), solution.objective,
                          solution.status.value)
        self.rows.append(row)
        return row

    def frame(self):
        return pd.DataFrame.from_records(
            [(row.tick, row.trigger, row.model, row.bindings_text,
              row.objective, row.status) for row in self.rows],
            columns=COLUMNS)

    def write_csv(self, stream):
        self.frame().to_csv(stream, index=False, lineterminator='\n')
