"""
The analyzed form of a VML model.
"""

from dataclasses import dataclass, field

from core.types import discretize

from analysis.symbols import SymbolKind
from language.nodes import Implication


@dataclass(frozen=True)
class Annotation:
    """Value type and unit of an expression node; unit None is untagged."""

    type: object
    unit: object = None


def model_expressions(model):
    """Yield (owner declaration, expression) for every expression."""
    for declaration in model.general_vars:
        yield declaration, declaration.expr
    for declaration in model.varpoints:
        for constraint in declaration.constraints:
            if isinstance(constraint, Implication):
                yield declaration, constraint.guard
                yield declaration, constraint.consequence
            else:
                yield declaration, constraint.relation
    for declaration in model.properties:
        for function in declaration.priorities + declaration.definitions:
            yield declaration, function.body
    for rule in model.rules:
        yield rule, rule.condition
        yield rule, rule.consequence


@dataclass(frozen=True)
class TypedModel:
    """
    A Model with its names resolved.

    `symbols` holds every variable and enum literal in declaration order,
    `general_order` the general vars in dependency order. `annotations`
    maps `id(node)` of every expression node to its Annotation (value
    type and unit) and is left out of equality, so re-analyzing a model
    compares equal.
    """

    name: str
    model: object
    symbols: dict
    types: dict
    general_order: tuple
    normalization: object = None
    annotations: dict = field(default_factory=dict, compare=False,
                              repr=False)

    def symbol(self, name):
        return self.symbols[name]

    def _of(self, kind):
        return [s for s in self.symbols.values() if s.kind is kind]

    @property
    def contexts(self):
        return self._of(SymbolKind.CONTEXT)

    @property
    def varpoints(self):
        return self._of(SymbolKind.VARPOINT)

    @property
    def general_vars(self):
        return [self.symbols[name] for name in self.general_order]

    @property
    def properties(self):
        return self._of(SymbolKind.PROPERTY)

    @property
    def rules(self):
        return self.model.rules

    @property
    def constants(self):
        """Enum literal names mapped to their codes."""
        return {s.name: s.declaration.code
                for s in self._of(SymbolKind.ENUM_LITERAL)}

    @property
    def units(self):
        return {name: s.unit for name, s in self.symbols.items()
                if s.unit is not None}

    def unit_of(self, name):
        symbol = self.symbols.get(name)
        return symbol.unit if symbol is not None else None

    def domain(self, name):
        return discretize(self.symbols[name].type)

    def domains(self, names=None):
        if names is None:
            names = [s.name for s in self.symbols.values() if s.has_domain]
        return {name: self.domain(name) for name in names}

    def type_of(self, expr):
        annotation = self.annotations.get(id(expr))
        return annotation.type if annotation is not None else None

    def unit_of_expression(self, expr):
        annotation = self.annotations.get(id(expr))
        return annotation.unit if annotation is not None else None

    def expressions(self):
        return model_expressions(self.model)
