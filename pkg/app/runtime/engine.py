"""
The adaptation engine: solves pipeline models on queries and events.
"""

import logging

from core.exceptions import MissingContext
from core.types import NumericType
from core.units import DIMENSIONLESS, convert_unit

from compiler.lowering import lower
from runtime.store import ContextStore, SubscriptionMode
from runtime.timeline import BindingTimeline
from solver.search import solve

logger = logging.getLogger(__name__)


def _unit(t):
    return t.unit_info if t.unit is not None else DIMENSIONLESS


class AdaptationEngine:
    """
    Solves the models of an AdaptationPipeline against a ContextStore.

    A query solves the queried model after every model it depends on.
    A fired push subscription re-solves the models reading the changed
    context and every model downstream of them. Each solve writes the
    linked variation points into the contexts they feed and adds a row
    to the timeline.
    """

    def __init__(self, pipeline, subscriptions=(), exact=None,
                 problems=None):
        self.pipeline = pipeline
        self.exact = exact
        self.problems = problems or {
            name: lower(pipeline[name]) for name in pipeline.order}
        variables = {}
        for name in pipeline.order:
            for parameter in self.problems[name].parameters:
                variables.setdefault(parameter.name, parameter)
        self.store = ContextStore(variables)
        for subscription in subscriptions:
            self.store.subscribe(subscription)
        self.timeline = BindingTimeline()
        self.latest = {}
        self.tick = 0

    @classmethod
    def from_manifest(cls, manifest, exact=None):
        return cls(manifest.pipeline, manifest.subscriptions, exact)

    def readers(self, context):
        """Models with `context` as a parameter, in pipeline order."""
        return [name for name in self.pipeline.order
                if context in self.problems[name].parameter_names]

    def update_context(self, name, value):
        """
        Set a context value; returns the subscriptions it fired.

        Raises UnknownContext for names no model declares.
        """
        fired = self.store.update_context(name, value)
        for subscription in fired:
            logger.info('Subscription %s fired at tick %d (%s=%s).',
                        subscription.id, self.tick, name, self.store[name])
        if any(s.mode is SubscriptionMode.PUSH for s in fired):
            self._push(name)
        return fired

    def _push(self, context):
        affected = set()
        for model in self.readers(context):
            affected.update(self.pipeline.downstream(model))
        for model in self.pipeline.order:
            if model not in affected:
                continue
            missing = self._missing(model)
            if missing:
                logger.info('Tick %d: %s not solved, no value for %s.',
                            self.tick, model, ', '.join(missing))
                continue
            self._solve(model, 'event')

    def trigger_query(self, model):
        """Solve `model` after its upstream models; returns its Solution."""
        solution = None
        for name in self.pipeline.upstream(model):
            solution = self._solve(name, 'query')
        return solution

    def _missing(self, model):
        return [name for name in self.problems[model].parameter_names
                if name not in self.store]

    def _solve(self, model, trigger):
        cp = self.problems[model]
        missing = self._missing(model)
        if missing:
            raise MissingContext(
                f'{model} has no value for {", ".join(missing)}.')
        solution = solve(cp, self.store.values(), exact=self.exact)
        self.latest[model] = solution
        self.timeline.record(self.tick, trigger, solution)
        logger.info('Tick %d %s solve: %s', self.tick, trigger, solution)
        if solution.is_optimal:
            self._propagate(model, solution)
        return solution

    def _propagate(self, model, solution):
        producer = self.problems[model]
        for link in self.pipeline.links_from(model):
            source = producer.variable(link.varpoint)
            target = self.problems[link.consumer].parameter(link.context)
            value = solution.bindings[link.varpoint]
            if isinstance(source.type, NumericType):
                value = convert_unit(value, _unit(source.type),
                                     _unit(target.type))
            elif source.is_enum:
                value = source.label(value)
            self.store.write(link.context, value)
