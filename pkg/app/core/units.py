"""
Physical units of VML numeric types.

The supported units form a closed table over four dimensions. Combining
values of different units follows one rule set, `combine`, which the
evaluator, the unit checker and the lowering pass all share.
"""

from dataclasses import dataclass
from enum import Enum

from core.exceptions import DimensionMismatch


class Dimension(Enum):
    """Dimensions as (length, time) exponents."""

    DIMENSIONLESS = (0, 0)
    LENGTH = (1, 0)
    TIME = (0, 1)
    SPEED = (1, -1)

    @classmethod
    def from_exponents(cls, exponents):
        for dimension in cls:
            if dimension.value == exponents:
                return dimension
        raise DimensionMismatch(
            f'Unsupported derived dimension L^{exponents[0]} T^{exponents[1]}.'
        )

    def __mul__(self, other):
        return Dimension.from_exponents(
            (self.value[0] + other.value[0], self.value[1] + other.value[1])
        )

    def __truediv__(self, other):
        return Dimension.from_exponents(
            (self.value[0] - other.value[0], self.value[1] - other.value[1])
        )


@dataclass(frozen=True)
class Unit:
    """A unit tag with its scale factor to the SI base of its dimension."""

    symbol: str
    dimension: Dimension
    scale: float

    def __str__(self):
        return self.symbol or '1'


DIMENSIONLESS = Unit('', Dimension.DIMENSIONLESS, 1.0)

UNITS = {
    '': DIMENSIONLESS,
    '1': DIMENSIONLESS,
    'm': Unit('m', Dimension.LENGTH, 1.0),
    'mm': Unit('mm', Dimension.LENGTH, 1e-3),
    'cm': Unit('cm', Dimension.LENGTH, 1e-2),
    'km': Unit('km', Dimension.LENGTH, 1e3),
    's': Unit('s', Dimension.TIME, 1.0),
    'min': Unit('min', Dimension.TIME, 60.0),
    'h': Unit('h', Dimension.TIME, 3600.0),
    'mm/s': Unit('mm/s', Dimension.SPEED, 1e-3),
    'm/s': Unit('m/s', Dimension.SPEED, 1.0),
}

BASE_UNITS = {
    Dimension.DIMENSIONLESS: DIMENSIONLESS,
    Dimension.LENGTH: UNITS['m'],
    Dimension.TIME: UNITS['s'],
    Dimension.SPEED: UNITS['m/s'],
}

ADDITIVE_OPERATORS = frozenset({'+', '-', '<', '<=', '>', '>=', '=', '!=',
                                'min', 'max'})
MULTIPLICATIVE_OPERATORS = frozenset({'*', '/'})


def get_unit(symbol):
    """Return the Unit for a declared symbol such as `"mm/s"`."""
    try:
        return UNITS[symbol.strip()]
    except KeyError:
        raise DimensionMismatch(
            f'Unknown unit {symbol!r}; supported: '
            + ', '.join(s for s in UNITS if s)
        ) from None


def base_unit(unit):
    return BASE_UNITS[unit.dimension]


def convert_unit(x, source, target):
    """Express `x` given in `source` units in `target` units."""
    if source.dimension is not target.dimension:
        raise DimensionMismatch(
            f'Cannot convert {source} ({source.dimension.name.lower()}) '
            f'to {target} ({target.dimension.name.lower()}).'
        )
    if source.scale == target.scale:
        return x
    return x * source.scale / target.scale


def _tagged(unit):
    """Units that take part in homogenization; dimensionless does not."""
    if unit is None or unit.dimension is Dimension.DIMENSIONLESS:
        return None
    return unit


@dataclass(frozen=True)
class Combination:
    """How two operands are converted before an operator applies."""

    result: Unit
    left: Unit = None
    right: Unit = None


def combine(operator, left, right):
    """
    Derive the unit of `left <operator> right`.

    `left` and `right` are Units or None for untagged values (literals and
    dimensionless types). Returned `left` / `right` name the unit each
    operand must be converted to first, or None to use it as is.
    """
    left, right = _tagged(left), _tagged(right)
    if operator in ADDITIVE_OPERATORS:
        if left is None or right is None:
            return Combination(left or right)
        if left == right:
            return Combination(left)
        if left.dimension is not right.dimension:
            raise DimensionMismatch(
                f'Cannot apply {operator!r} to {left} and {right}.'
            )
        target = base_unit(left)
        return Combination(target, target, target)
    if operator in MULTIPLICATIVE_OPERATORS:
        if left is None and right is None:
            return Combination(None)
        if right is None:
            return Combination(left)
        if left is None:
            if operator == '*':
                return Combination(right)
            dimension = Dimension.DIMENSIONLESS / right.dimension
            return Combination(_tagged(BASE_UNITS[dimension]), None,
                               base_unit(right))
        if operator == '*':
            dimension = left.dimension * right.dimension
        else:
            dimension = left.dimension / right.dimension
        return Combination(_tagged(BASE_UNITS[dimension]),
                           base_unit(left), base_unit(right))
    raise ValueError(f'Unknown operator {operator!r}.')
