"""
Tests for the context store and its subscriptions.
"""
from django.test import SimpleTestCase

from core.exceptions import UnknownContext
from core.types import NumericType

from compiler.problem import Parameter
from language.grammar import parse_expression
from runtime.store import ContextStore, Subscription, SubscriptionMode


def percent(name):
    """A context over [5, 100] in unit steps."""
    return Parameter(name, NumericType('percentType', 5, 100, 1))


def store_with(*subscriptions):
    """A store of battery and noise contexts with `subscriptions`."""
    store = ContextStore({name: percent(name)
                          for name in ('ctx_battery', 'ctx_noise')})
    for subscription in subscriptions:
        store.subscribe(subscription)
    return store


def low_battery(mode=SubscriptionMode.PUSH):
    """Subscription to the battery dropping below 15."""
    return Subscription('low_battery', 'ctx_battery',
                        parse_expression('ctx_battery < 15'), mode)


class UpdateContextTests(SimpleTestCase):
    """Test storing values and firing subscriptions."""

    def test_fires_on_edge(self):
        """Test a threshold crossing fires exactly once."""

        store = store_with(low_battery())

        self.assertEqual(store.update_context('ctx_battery', 50), [])
        self.assertEqual(store.update_context('ctx_battery', 14),
                         [low_battery()])
        self.assertEqual(store.update_context('ctx_battery', 12), [])

    def test_fires_again_after_reset(self):
        """Test the predicate fires again after turning false."""

        store = store_with(low_battery())

        store.update_context('ctx_battery', 10)
        store.update_context('ctx_battery', 40)
        fired = store.update_context('ctx_battery', 8)

        self.assertEqual([s.id for s in fired], ['low_battery'])

    def test_first_value_fires(self):
        """Test a first value already past the threshold fires."""

        store = store_with(low_battery())

        self.assertEqual(len(store.update_context('ctx_battery', 10)), 1)

    def test_other_context_does_not_fire(self):
        """Test only updates of the watched context are evaluated."""

        store = store_with(low_battery())
        store.update_context('ctx_battery', 50)

        self.assertEqual(store.update_context('ctx_noise', 90), [])

    def test_unbound_predicate_is_false(self):
        """Test a predicate over a missing context does not fire."""

        subscription = Subscription(
            'mixed', 'ctx_battery',
            parse_expression('ctx_battery < 15 & ctx_noise > 50'))
        store = store_with(subscription)

        self.assertEqual(store.update_context('ctx_battery', 10), [])

    def test_values_clamped_and_snapped(self):
        """Test stored values lie on the context's grid."""

        store = store_with()

        store.update_context('ctx_noise', 0)
        store.update_context('ctx_battery', '42.4')

        self.assertEqual(store['ctx_noise'], 5)
        self.assertEqual(store['ctx_battery'], 42)
        self.assertEqual(store.values(),
                         {'ctx_noise': 5, 'ctx_battery': 42})

    def test_write_does_not_fire(self):
        """Test plain writes leave subscriptions untouched."""

        store = store_with(low_battery())

        store.write('ctx_battery', 10)

        self.assertIn('ctx_battery', store)
        self.assertEqual(len(store.update_context('ctx_battery', 9)), 1)

    def test_unknown_context(self):
        """Test undeclared contexts are refused."""

        store = store_with()

        with self.assertRaises(UnknownContext):
            store.update_context('ctx_light', 3)
        with self.assertRaises(UnknownContext):
            store.subscribe(Subscription(
                'dark', 'ctx_light', parse_expression('ctx_light < 3')))
