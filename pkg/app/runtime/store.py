"""
Current context values and edge-triggered subscriptions.
"""

import logging
from dataclasses import dataclass
from enum import Enum

from core.exceptions import UnboundVariable, UnknownContext
from core.expressions import Evaluator

from solver.snapshot import coerce_value

logger = logging.getLogger(__name__)


class SubscriptionMode(str, Enum):
    PUSH = 'push'
    NOTIFY = 'notify'


@dataclass(frozen=True)
class Subscription:
    """
    Interest in `predicate` becoming true after `context` changes.

    Push subscriptions re-solve the models reading `context` when they
    fire; notify subscriptions are only reported.
    """

    id: str
    context: str
    predicate: object
    mode: SubscriptionMode = SubscriptionMode.PUSH


class ContextStore:
    """
    Context values shared by every model of a pipeline.

    `variables` maps each context name to the variable whose type clamps
    and snaps its values. Updates are applied one at a time.
    """

    def __init__(self, variables):
        self.variables = dict(variables)
        self._values = {}
        self._subscriptions = []
        self._states = {}

    def __contains__(self, name):
        return name in self._values

    def __getitem__(self, name):
        return self._values[name]

    def values(self):
        return dict(self._values)

    @property
    def subscriptions(self):
        return tuple(self._subscriptions)

    def subscribe(self, subscription):
        if subscription.context not in self.variables:
            raise UnknownContext(
                f'Subscription {subscription.id!r} watches undeclared '
                f'context {subscription.context!r}.')
        self._subscriptions.append(subscription)
        self._states[subscription.id] = False

    def _variable(self, name):
        try:
            return self.variables[name]
        except KeyError:
            raise UnknownContext(f'Undeclared context {name!r}.') from None

    def write(self, name, value):
        """Store `value` without evaluating subscriptions."""
        variable = self._variable(name)
        value, clamped = coerce_value(variable, value)
        if clamped:
            logger.warning('Context %s clamped to %s.', name, value)
        self._values[name] = value
        return value

    def _holds(self, subscription):
        try:
            return bool(Evaluator().evaluate(subscription.predicate,
                                             self._values))
        except UnboundVariable:
            return False

    def update_context(self, name, value):
        """
        Store `value` and return the subscriptions it fired.

        A subscription fires when its predicate turns from false to true;
        an unevaluable predicate counts as false.
        """
        self.write(name, value)
        fired = []
        for subscription in self._subscriptions:
            if subscription.context != name:
                continue
            holds = self._holds(subscription)
            if holds and not self._states[subscription.id]:
                fired.append(subscription)
            self._states[subscription.id] = holds
        return fired
