"""
Tests for lowering analyzed models into constraint problems.
"""
import numpy as np

from django.conf import settings
from django.test import SimpleTestCase

from core.exceptions import DiagnosticError
from core.expressions import (
    ArrayEvaluator,
    Binary,
    Evaluator,
    Extremum,
    Literal,
    VarRef,
)

from analysis.loading import analyze, load_model
from compiler.lowering import homogenize, lower
from compiler.problem import TRUE, ConstraintKind
from language.grammar import parse_expression, parse_model

SMALL = '''
number p { range: [0,100]; precision: 1; }
context c : p;
varpoint x : p;
varpoint y : p { y >= 2, c > 3 => y = 5; }
property cost : p minimized {
  priorities: f(c) = c;
  definitions: f(x) = x; }
'''


def fixture_text(name):
    """Source of a shipped fixture."""
    return (settings.VML_MODELS_DIR / name).read_text()


def load(name):
    """Load a shipped fixture by file name."""
    return load_model(settings.VML_MODELS_DIR / name)


def model_from(text, name='small'):
    """Analyze a model from source text."""
    return analyze(parse_model(text), name)


class LowerVelocityTests(SimpleTestCase):
    """Test lowering the velocity model."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cp = lower(load('velocity.vml'))

    def test_shape(self):
        """Test parameters, variables and rules keep declaration order."""

        self.assertEqual(self.cp.name, 'velocity')
        self.assertEqual(self.cp.parameter_names,
                         ('ctx_battery', 'ctx_noise'))
        self.assertEqual(self.cp.variable_names,
                         ('maximumVelocity', 'speakerVolume'))
        self.assertEqual([c.name for c in self.cp.constraints],
                         ['low_noise', 'medium_noise', 'high_noise'])
        self.assertTrue(all(c.kind is ConstraintKind.RULE
                            for c in self.cp.constraints))
        self.assertEqual(self.cp.warnings, ())
        self.assertEqual(self.cp.segments, settings.VML_SEGMENTS)

    def test_signs(self):
        """Test maximized properties enter with sign -1."""

        self.assertEqual([(t.property, t.sign) for t in self.cp.objective],
                         [('performance', -1), ('energyConsumption', 1)])

    def test_range_extremum_folded(self):
        """Test no range extremum is left in the weights."""

        for term in self.cp.objective:
            self.assertFalse(any(isinstance(node, Extremum)
                                 for node in term.weight.walk()))

    def test_definition_forms(self):
        """Test the identity is affine and the exponential linearized."""

        performance, energy = self.cp.objective
        identity, = performance.definitions
        exponential, = energy.definitions

        self.assertTrue(identity.affine)
        self.assertIsNone(identity.surrogate)
        self.assertEqual(identity.variables, ('maximumVelocity',))
        self.assertFalse(exponential.affine)
        self.assertEqual(exponential.surrogate.segments, 5)
        self.assertEqual(exponential.surrogate.variable, 'maximumVelocity')
        self.assertTrue(exponential.is_linearized)

    def test_weights_in_unit_interval(self):
        """Test weights lie in [0, 1] over the whole battery range."""

        battery = np.arange(5, 101, dtype=float)
        total = np.zeros_like(battery)
        for term in self.cp.objective:
            weight = ArrayEvaluator().evaluate(
                term.weight, {'ctx_battery': battery})
            self.assertGreaterEqual(float(weight.min()), -1e-9)
            self.assertLessEqual(float(weight.max()), 1 + 1e-9)
            total = total + weight

        np.testing.assert_allclose(total, 1.0, atol=1e-9)

    def test_definitions_in_score_range(self):
        """Test normalized definitions lie in [0, 100]."""

        velocity = np.round(np.arange(100, 600.05, 0.1), 10)
        for term in self.cp.objective:
            for definition in term.definitions:
                values = ArrayEvaluator().evaluate(
                    definition.expr, {'maximumVelocity': velocity})
                self.assertGreaterEqual(float(values.min()), -1e-9)
                self.assertLessEqual(float(values.max()), 100 + 1e-9)

    def test_segments_argument(self):
        """Test an explicit segment count overrides the setting."""

        cp = lower(load('velocity.vml'), segments=3)

        self.assertEqual(cp.segments, 3)
        self.assertEqual(cp.objective[1].definitions[0].surrogate.segments, 3)

    def test_sign_flip(self):
        """Test flipping one direction changes only that term's sign."""

        text = fixture_text('velocity.vml').replace(
            'performance : percentType maximized',
            'performance : percentType minimized')
        flipped = lower(model_from(text, 'velocity'))

        self.assertEqual([t.sign for t in flipped.objective], [1, 1])
        for original, changed in zip(self.cp.objective, flipped.objective):
            self.assertEqual(original.weight, changed.weight)
            self.assertEqual(original.definitions, changed.definitions)


class LowerCoffeeTests(SimpleTestCase):
    """Test lowering the coffee machine model."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cp = lower(load('coffee.vml'))

    def test_shape(self):
        """Test a rules-only model has no objective terms."""

        self.assertEqual(len(self.cp.parameters), 6)
        self.assertEqual(self.cp.variable_names, ('coffeeMachine',))
        self.assertEqual(len(self.cp.constraints), 4)
        self.assertEqual(self.cp.objective, ())
        self.assertEqual([g.name for g in self.cp.general_vars],
                         ['timeMachine_A', 'timeMachine_B'])
        self.assertTrue(self.cp.variable('coffeeMachine').is_enum)

    def test_enum_literal_coded(self):
        """Test enum literals in rules are replaced by their codes."""

        first = self.cp.constraints[0]

        self.assertEqual(first.relation,
                         Binary('=', VarRef('coffeeMachine'), Literal(0)))
        self.assertEqual(self.cp.constraints[1].relation.right, Literal(1))

    def test_travel_time_homogenized(self):
        """Test distance over velocity converts mm/s to m/s."""

        general = self.cp.general_vars[0]
        env = {'ctx_waitingTimeMachine_A': 100,
               'ctx_distanceMachine_A': 2.0,
               'ctx_maxAllowedVelocity': 400.0}

        self.assertAlmostEqual(Evaluator().evaluate(general.expr, env), 105.0)
        self.assertEqual(general.unit.symbol, 's')

    def test_labels(self):
        """Test enum codes are labelled with literal names."""

        self.assertEqual(self.cp.labels({'coffeeMachine': 1}),
                         {'coffeeMachine': 'COFFEE_MACHINE_B'})


class LowerConstraintTests(SimpleTestCase):
    """Test lowering varpoint constraints and failure cases."""

    def test_varpoint_constraints(self):
        """Test invariants and implications are numbered per varpoint."""

        cp = lower(model_from(SMALL))
        invariant, implication = cp.constraints

        self.assertEqual(invariant.name, 'y#1')
        self.assertIs(invariant.kind, ConstraintKind.INVARIANT)
        self.assertEqual(invariant.guard, TRUE)
        self.assertTrue(invariant.is_unconditional)
        self.assertEqual(implication.name, 'y#2')
        self.assertIs(implication.kind, ConstraintKind.IMPLICATION)
        self.assertEqual(implication.guard, parse_expression('c > 3'))

    def test_unbound_varpoint_warns(self):
        """Test a variation point used nowhere is reported and logged."""

        with self.assertLogs('compiler', 'WARNING') as logs:
            cp = lower(model_from(SMALL + 'varpoint z : p;\n'))

        self.assertEqual([w.code for w in cp.warnings], ['UnboundVarpoint'])
        self.assertIn("'z'", cp.warnings[0].message)
        self.assertIn("'z'", logs.output[0])

    def test_missing_direction(self):
        """Test a property without direction cannot be lowered."""

        tm = model_from(SMALL.replace('p minimized', 'p'))

        with self.assertRaises(DiagnosticError) as context:
            lower(tm)

        self.assertEqual([d.code for d in context.exception.diagnostics],
                         ['MissingDirection'])

    def test_homogenize_enum_and_units(self):
        """Test homogenize folds literals and inserts conversions."""

        tm = load('coffee.vml')
        expr = parse_expression(
            'coffeeMachine = COFFEE_MACHINE_B & ctx_distanceMachine_A > 1')

        lowered = homogenize(expr, tm)

        self.assertEqual(lowered.left.right, Literal(1))
        self.assertEqual(lowered.right, parse_expression(
            'ctx_distanceMachine_A > 1'))
