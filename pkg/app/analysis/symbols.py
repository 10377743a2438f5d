"""
Symbols and value types of an analyzed model.
"""

from dataclasses import dataclass, field
from enum import Enum

from core.types import BoolType, EnumType, NumericType


class SymbolKind(str, Enum):
    CONTEXT = 'context'
    VARPOINT = 'varpoint'
    GENERAL = 'general var'
    PROPERTY = 'property'
    ENUM_LITERAL = 'enum literal'


class ValueKind(str, Enum):
    NUMBER = 'number'
    BOOLEAN = 'boolean'
    ENUM = 'enum'
    # Poison type of expressions that already produced a diagnostic.
    ERROR = 'error'


@dataclass(frozen=True)
class ValueType:
    kind: ValueKind
    enum: str = None

    def __str__(self):
        return self.enum if self.kind is ValueKind.ENUM else self.kind.value

    @property
    def is_error(self):
        return self.kind is ValueKind.ERROR

    @property
    def is_arithmetic(self):
        """Numbers and enum codes take part in arithmetic."""
        return self.kind in (ValueKind.NUMBER, ValueKind.ENUM)


NUMBER = ValueType(ValueKind.NUMBER)
BOOLEAN = ValueType(ValueKind.BOOLEAN)
ERROR = ValueType(ValueKind.ERROR)


def value_type_of(t):
    """The ValueType of values of a declared type."""
    if isinstance(t, NumericType):
        return NUMBER
    if isinstance(t, EnumType):
        return ValueType(ValueKind.ENUM, t.name)
    if isinstance(t, BoolType):
        return BOOLEAN
    return ERROR


@dataclass(frozen=True)
class Symbol:
    """A declared name with what analysis learnt about it."""

    name: str
    kind: SymbolKind
    value_type: ValueType
    type: object = None
    unit: object = None
    declaration: object = field(default=None, repr=False)

    @property
    def has_domain(self):
        return self.kind in (SymbolKind.CONTEXT, SymbolKind.VARPOINT) \
            and self.type is not None
