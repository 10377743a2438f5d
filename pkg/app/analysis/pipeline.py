"""
Linking analyzed models into an adaptation pipeline.
"""

import logging
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from core.diagnostics import Diagnostic
from core.exceptions import DiagnosticError
from core.types import EnumType, NumericType
from core.units import DIMENSIONLESS

from analysis.symbols import SymbolKind

logger = logging.getLogger(__name__)

# Relative tolerance when comparing linked ranges in SI units.
RANGE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Link:
    """`producer.varpoint` feeds `consumer.context`."""

    producer: str
    varpoint: str
    consumer: str
    context: str

    def __str__(self):
        return (f'{self.producer}.{self.varpoint} -> '
                f'{self.consumer}.{self.context}')

    @classmethod
    def parse(cls, text):
        """Read `producer.varpoint -> consumer.context`."""
        try:
            source, target = (part.strip() for part in text.split('->'))
            producer, varpoint = source.split('.')
            consumer, context = target.split('.')
        except ValueError:
            raise ValueError(
                f'Expected "model.varpoint -> model.context", got {text!r}.'
            ) from None
        return cls(producer, varpoint, consumer, context)


@dataclass(frozen=True)
class AdaptationPipeline:
    """Models in solve order plus the links between them."""

    models: dict
    links: tuple
    order: tuple

    def __getitem__(self, name):
        return self.models[name]

    def links_from(self, name):
        return [link for link in self.links if link.producer == name]

    def links_into(self, name):
        return [link for link in self.links if link.consumer == name]

    def downstream(self, name):
        """`name` and every model fed by it, directly or not, in order."""
        reached = {name}
        for model in self.order:
            if any(link.producer in reached
                   for link in self.links_into(model)):
                reached.add(model)
        return [model for model in self.order if model in reached]

    def upstream(self, name):
        """Every model `name` depends on, then `name`, in order."""
        reached = {name}
        for model in reversed(self.order):
            if any(link.consumer in reached
                   for link in self.links_from(model)):
                reached.add(model)
        return [model for model in self.order if model in reached]


def _si_range(t):
    unit = t.unit_info if t.unit is not None else DIMENSIONLESS
    return t.lo * unit.scale, t.hi * unit.scale


def _close(a, b):
    return abs(a - b) <= RANGE_TOLERANCE * max(1.0, abs(a), abs(b))


def _check_link(link, producer, consumer):
    """Diagnostics for the unit and range compatibility of one link."""
    source, target = producer.type, consumer.type
    if isinstance(source, NumericType) and isinstance(target, NumericType):
        source_unit = source.unit_info if source.unit else DIMENSIONLESS
        target_unit = target.unit_info if target.unit else DIMENSIONLESS
        if source_unit.dimension is not target_unit.dimension:
            return [Diagnostic.error(
                None, 'UnitMismatch',
                f'Link {link}: {source_unit} and {target_unit} measure '
                f'different dimensions.',
            )]
        (source_lo, source_hi), (target_lo, target_hi) = \
            _si_range(source), _si_range(target)
        if _close(source_lo, target_lo) and _close(source_hi, target_hi):
            return []
    elif isinstance(source, EnumType) and isinstance(target, EnumType):
        if set(source.literals) == set(target.literals):
            return []
    return [Diagnostic.error(
        None, 'RangeMismatch',
        f'Link {link}: {producer.type.name} and {consumer.type.name} do not '
        f'have the same value range.',
    )]


def _lookup(models, model_name, name, kind, link):
    tm = models.get(model_name)
    if tm is None:
        return None, Diagnostic.error(
            None, 'UndeclaredVariable',
            f'Link {link}: unknown model {model_name!r}.')
    symbol = tm.symbols.get(name)
    if symbol is None or symbol.kind is not kind:
        return None, Diagnostic.error(
            None, 'UndeclaredVariable',
            f'Link {link}: {model_name!r} has no {kind.value} {name!r}.')
    return symbol, None


def link_models(models, links):
    """
    Build an AdaptationPipeline from analyzed models and links.

    `models` is a list of TypedModels (named by `TypedModel.name`) and
    `links` a list of Link. Raises DiagnosticError for unknown names,
    unit or range mismatches and cyclic links.
    """
    by_name = {tm.name: tm for tm in models}
    diagnostics = []
    sorter = TopologicalSorter({name: () for name in by_name})
    for link in links:
        producer, missing_producer = _lookup(
            by_name, link.producer, link.varpoint, SymbolKind.VARPOINT, link)
        consumer, missing_consumer = _lookup(
            by_name, link.consumer, link.context, SymbolKind.CONTEXT, link)
        missing = [d for d in (missing_producer, missing_consumer) if d]
        if missing:
            diagnostics.extend(missing)
            continue
        if link.producer == link.consumer:
            diagnostics.append(Diagnostic.error(
                None, 'LinkCycle', f'Link {link} feeds its own model.'))
            continue
        diagnostics.extend(_check_link(link, producer, consumer))
        sorter.add(link.consumer, link.producer)
    try:
        order = tuple(sorter.static_order())
    except CycleError as error:
        diagnostics.append(Diagnostic.error(
            None, 'LinkCycle',
            'Links form a cycle: ' + ' -> '.join(error.args[1]) + '.'))
        order = ()
    if diagnostics:
        raise DiagnosticError(diagnostics)
    logger.debug('Pipeline solve order: %s', ', '.join(order))
    return AdaptationPipeline(by_name, tuple(links), order)
