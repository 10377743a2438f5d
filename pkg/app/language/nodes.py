"""
Declaration nodes of a parsed VML model.
"""

from dataclasses import dataclass, field
from enum import Enum

from core.diagnostics import Span
from core.types import BoolType, EnumType


class Direction(str, Enum):
    MINIMIZED = 'minimized'
    MAXIMIZED = 'maximized'
    UNSPECIFIED = ''


@dataclass(frozen=True)
class TypeDefinition:
    type: object
    span: Span = field(default=None, compare=False, repr=False)

    @property
    def name(self):
        return self.type.name

    @property
    def is_enum(self):
        return isinstance(self.type, EnumType)

    @property
    def is_boolean(self):
        return isinstance(self.type, BoolType)


@dataclass(frozen=True)
class ContextDecl:
    name: str
    type_name: str
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Implication:
    """`guard => consequence`."""

    guard: object
    consequence: object
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Invariant:
    relation: object
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class VarpointDecl:
    name: str
    type_name: str
    constraints: tuple = ()
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class GeneralVarDecl:
    """`var name [: type] = expr;` (the type annotation is optional)."""

    name: str
    type_name: str
    expr: object
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class FunctionDefinition:
    name: str
    params: tuple
    body: object
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class PropertyDecl:
    name: str
    type_name: str
    direction: Direction
    priorities: tuple
    definitions: tuple
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class AdaptationRule:
    name: str
    condition: object
    consequence: object
    span: Span = field(default=None, compare=False, repr=False)


VARIABLE_DECLARATIONS = (ContextDecl, VarpointDecl, GeneralVarDecl,
                         PropertyDecl)


@dataclass(frozen=True)
class Model:
    """A VML file: declarations in source order."""

    declarations: tuple

    def _of(self, kind):
        return tuple(d for d in self.declarations if isinstance(d, kind))

    @property
    def types(self):
        return self._of(TypeDefinition)

    @property
    def variables(self):
        return self._of(VARIABLE_DECLARATIONS)

    @property
    def contexts(self):
        return self._of(ContextDecl)

    @property
    def varpoints(self):
        return self._of(VarpointDecl)

    @property
    def general_vars(self):
        return self._of(GeneralVarDecl)

    @property
    def properties(self):
        return self._of(PropertyDecl)

    @property
    def rules(self):
        return self._of(AdaptationRule)
