"""
Value spaces of VML variables and their discretized domains.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from core.exceptions import InvalidType
from core.units import DIMENSIONLESS, get_unit

# Grid values are rounded to this many decimals so that 0.1 steps land on
# the printed values instead of accumulating float error.
GRID_DECIMALS = 10


@dataclass(frozen=True)
class NumericType:
    """A real interval discretized with a fixed step, with an optional unit."""

    name: str
    lo: float
    hi: float
    precision: float
    unit: str = None

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidType(
                f'Type {self.name!r} has an empty range '
                f'[{self.lo}, {self.hi}].'
            )
        if not self.precision > 0:
            raise InvalidType(
                f'Type {self.name!r} needs a positive precision.'
            )
        if self.precision > self.hi - self.lo:
            raise InvalidType(
                f'Type {self.name!r} has precision {self.precision} wider '
                f'than its range.'
            )
        if self.unit is not None:
            get_unit(self.unit)

    @property
    def cardinality(self):
        return int(math.floor((self.hi - self.lo) / self.precision + 1e-9)) + 1

    @property
    def unit_info(self):
        return get_unit(self.unit) if self.unit is not None else DIMENSIONLESS

    @property
    def is_integral(self):
        """True when every grid value is an integer."""
        return all(float(v).is_integer()
                   for v in (self.lo, self.hi, self.precision))


@dataclass(frozen=True)
class EnumLiteral:
    name: str
    code: int
    explicit: bool = False


@dataclass(frozen=True)
class EnumType:
    """Named literals coded by integers (0-based position by default)."""

    name: str
    literals: tuple

    def __post_init__(self):
        if not self.literals:
            raise InvalidType(f'Enum {self.name!r} has no literals.')
        names = [literal.name for literal in self.literals]
        codes = [literal.code for literal in self.literals]
        if len(set(names)) != len(names):
            raise InvalidType(f'Enum {self.name!r} repeats a literal name.')
        if len(set(codes)) != len(codes):
            raise InvalidType(f'Enum {self.name!r} repeats a literal code.')

    @classmethod
    def from_names(cls, name, names):
        return cls(name, tuple(EnumLiteral(n, i) for i, n in enumerate(names)))

    def code_of(self, literal_name):
        for literal in self.literals:
            if literal.name == literal_name:
                return literal.code
        raise KeyError(literal_name)

    def name_of(self, code):
        for literal in self.literals:
            if literal.code == code:
                return literal.name
        raise KeyError(code)


@dataclass(frozen=True)
class BoolType:
    name: str


@dataclass(frozen=True)
class Domain:
    """An ordered finite set of values a variable may take."""

    values: tuple
    precision: float = None
    labels: dict = field(default=None, compare=False, hash=False)

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, index):
        return self.values[index]

    @property
    def lo(self):
        return self.values[0]

    @property
    def last(self):
        return self.values[-1]

    @property
    def is_grid(self):
        return self.precision is not None

    def as_array(self):
        return np.asarray(self.values, dtype=float)

    def index_of(self, value):
        """Index of the domain value nearest to `value` (grid snapping)."""
        if self.is_grid:
            position = round((float(value) - self.values[0]) / self.precision)
            return int(min(max(position, 0), len(self.values) - 1))
        return self.values.index(value)

    def snap(self, value):
        return self.values[self.index_of(value)]

    def label(self, value):
        if self.labels:
            return self.labels.get(value, value)
        return value


@lru_cache(maxsize=None)
def discretize(t):
    """Return the full value grid of a type."""
    if isinstance(t, NumericType):
        steps = np.arange(t.cardinality, dtype=float)
        grid = np.round(t.lo + t.precision * steps, GRID_DECIMALS)
        cast = int if t.is_integral else float
        return Domain(tuple(cast(v) for v in grid), precision=t.precision)
    if isinstance(t, EnumType):
        literals = sorted(t.literals, key=lambda literal: literal.code)
        return Domain(
            tuple(literal.code for literal in literals),
            labels={literal.code: literal.name for literal in literals},
        )
    if isinstance(t, BoolType):
        return Domain((False, True))
    raise TypeError(f'Cannot discretize {t!r}.')


def clamp(t, value):
    """Clamp a numeric value into the range of `t`; others pass through."""
    if isinstance(t, NumericType):
        return min(max(value, t.lo), t.hi)
    return value
