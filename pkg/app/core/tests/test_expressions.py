"""
Tests for expression evaluation.
"""
import math

from django.test import SimpleTestCase

from core.exceptions import DimensionMismatch, DivisionByZero, UnboundVariable
from core.expressions import (
    Binary,
    Call,
    Evaluator,
    Extremum,
    Literal,
    Unary,
    VarRef,
    eval_expr,
)
from core.types import NumericType, discretize
from core.units import get_unit

BATTERY = NumericType('batteryType', 5, 100, 1)


def time_to_machine():
    """Return `wait + dist / vel` as an expression tree."""
    return Binary('+', VarRef('wait'),
                  Binary('/', VarRef('dist'), VarRef('vel')))


def battery_decay():
    """Return `exp(-ctx_battery / 15)`."""
    return Call('exp', (Binary('/', Unary('-', VarRef('ctx_battery')),
                               Literal(15)),))


class EvalExprTests(SimpleTestCase):
    """Test evaluating expressions against environments."""

    def test_homogenized_travel_time(self):
        """Test 100 s + 3.0 m / 600 mm/s is 105 s."""

        units = {'wait': get_unit('s'), 'dist': get_unit('m'),
                 'vel': get_unit('mm/s')}
        value, unit = Evaluator(units=units).quantity(
            time_to_machine(), {'wait': 100, 'dist': 3.0, 'vel': 600})

        self.assertAlmostEqual(value, 105.0)
        self.assertEqual(unit, get_unit('s'))

    def test_range_extremum(self):
        """Test max(exp(-b/15)) over [5,100] is taken at b = 5."""

        expr = Extremum('max', battery_decay())
        value = eval_expr(expr, {},
                          domains={'ctx_battery': discretize(BATTERY)})

        self.assertAlmostEqual(value, math.exp(-5 / 15))
        self.assertAlmostEqual(value, 0.7165, places=4)

    def test_extremum_matches_endpoints(self):
        """Test extrema of monotone functions equal endpoint values."""

        domain = discretize(BATTERY)
        evaluator = Evaluator(domains={'ctx_battery': domain})
        values = [evaluator.evaluate(battery_decay(), {'ctx_battery': b})
                  for b in domain]

        self.assertEqual(evaluator.evaluate(
            Extremum('max', battery_decay()), {}), max(values))
        self.assertEqual(evaluator.evaluate(
            Extremum('min', battery_decay()), {}), values[-1])

    def test_comparison(self):
        """Test ctx_noise < 20 holds for a noise of 10."""

        expr = Binary('<', VarRef('ctx_noise'), Literal(20))

        self.assertIs(eval_expr(expr, {'ctx_noise': 10}), True)

    def test_exp_uses_declared_unit(self):
        """Test exp(v / 150) reads v in its declared unit."""

        expr = Call('exp', (Binary('/', VarRef('v'), Literal(150)),))
        value = eval_expr(expr, {'v': 600}, units={'v': get_unit('mm/s')})

        self.assertAlmostEqual(value, math.exp(4))

    def test_two_argument_extrema(self):
        """Test min(a, b) compares in a common unit."""

        expr = Call('min', (VarRef('a'), VarRef('b')))
        value, unit = Evaluator(
            units={'a': get_unit('m'), 'b': get_unit('mm')},
        ).quantity(expr, {'a': 1, 'b': 500})

        self.assertAlmostEqual(value, 0.5)
        self.assertEqual(unit, get_unit('m'))

    def test_enum_constants(self):
        """Test enum literal names evaluate to their codes."""

        expr = Binary('=', VarRef('machine'), VarRef('COFFEE_MACHINE_B'))

        self.assertTrue(eval_expr(expr, {'machine': 1},
                                  constants={'COFFEE_MACHINE_B': 1}))

    def test_short_circuit(self):
        """Test the right side of a decided conjunction is not evaluated."""

        zero = Binary('>', Binary('/', Literal(1), Literal(0)), Literal(0))

        self.assertIs(eval_expr(Binary('&', Literal(False), zero), {}), False)
        self.assertIs(eval_expr(Binary('|', Literal(True), zero), {}), True)

    def test_division_by_zero(self):
        """Test dividing by zero raises."""

        with self.assertRaises(DivisionByZero):
            eval_expr(Binary('/', VarRef('x'), Literal(0)), {'x': 1})

    def test_unbound_variable(self):
        """Test an unbound name raises with the name."""

        with self.assertRaises(UnboundVariable) as context:
            eval_expr(VarRef('missing'), {})

        self.assertEqual(context.exception.name, 'missing')

    def test_cross_dimension_addition(self):
        """Test adding seconds to metres raises."""

        with self.assertRaises(DimensionMismatch):
            eval_expr(Binary('+', VarRef('t'), VarRef('d')), {'t': 1, 'd': 1},
                      units={'t': get_unit('s'), 'd': get_unit('m')})

    def test_pure(self):
        """Test repeated evaluation is bit-identical."""

        env = {'wait': 37, 'dist': 12.3, 'vel': 456.7}
        units = {'wait': get_unit('s'), 'dist': get_unit('m'),
                 'vel': get_unit('mm/s')}

        first = eval_expr(time_to_machine(), env, units=units)
        second = eval_expr(time_to_machine(), env, units=units)
        self.assertEqual(first.hex(), second.hex())

    def test_free_variables(self):
        """Test free variables are listed once in first-use order."""

        expr = Binary('+', VarRef('b'), Binary('*', VarRef('a'), VarRef('b')))

        self.assertEqual(expr.free_variables(), ('b', 'a'))
