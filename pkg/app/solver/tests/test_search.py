"""
Tests for branch-and-bound search and the exhaustive oracle.
"""
import numpy as np

from django.conf import settings
from django.test import SimpleTestCase

from core.exceptions import DomainTooLarge, IncompleteBinding
from core.expressions import Evaluator

from analysis.loading import analyze, load_model
from compiler.lowering import lower
from language.grammar import parse_model
from solver.cost import context_env, evaluate_cost
from solver.search import brute_force, solve
from solver.snapshot import make_snapshot
from solver.solution import SolutionStatus

CONFLICT = '''
number p { range: [0,10]; precision: 1; }
context c : p;
varpoint x : p;
rule one : c > 3 => x = 1;
rule two : c > 3 => x = 2;
'''

IDENTITY = '''
number p { range: [0,10]; precision: 1; }
context c : p;
varpoint x : p;
property cost : p minimized {
  priorities: f(c) = c;
  definitions: f(x) = x; }
'''

COUPLED = '''
number p { range: [0,10]; precision: 1; }
context c : p;
varpoint x : p;
varpoint y : p { x + y >= 5; }
property cost : p minimized {
  priorities: f(c) = c;
  definitions: f(x, y) = x + y; }
'''

PRODUCT = '''
number p { range: [0,10]; precision: 1; }
context c : p;
varpoint x : p;
varpoint y : p { c > 5 => y >= x; }
property cost : p maximized {
  priorities: f(c) = c;
  definitions: f(x, y) = x * y - y; }
'''


def fixture(name):
    """Lower a shipped fixture by file name."""
    return lower(load_model(settings.VML_MODELS_DIR / name))


def problem_from(text):
    """Lower a model from source text."""
    return lower(analyze(parse_model(text), 'model'))


def random_velocity_contexts(count, seed):
    """Random contexts of the velocity model."""
    rng = np.random.default_rng(seed)
    return [{'ctx_battery': int(rng.integers(5, 101)),
             'ctx_noise': int(rng.integers(5, 101))} for _ in range(count)]


def random_coffee_contexts(count, seed):
    """Random contexts of the coffee models."""
    rng = np.random.default_rng(seed)
    return [{
        'ctx_battery': int(rng.integers(5, 101)),
        'ctx_distanceMachine_A': int(rng.integers(0, 201)) / 10,
        'ctx_distanceMachine_B': int(rng.integers(0, 201)) / 10,
        'ctx_waitingTimeMachine_A': int(rng.integers(10, 301)),
        'ctx_waitingTimeMachine_B': int(rng.integers(10, 301)),
        'ctx_maxAllowedVelocity': int(rng.integers(1000, 6001)) / 10,
    } for _ in range(count)]


class SolveVelocityTests(SimpleTestCase):
    """Test solving the velocity model."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cp = fixture('velocity.vml')

    def test_full_battery_quiet(self):
        """Test full battery runs at top speed with low volume."""

        solution = solve(self.cp, {'ctx_battery': 100, 'ctx_noise': 10})

        self.assertIs(solution.status, SolutionStatus.OPTIMAL)
        self.assertEqual(solution.bindings,
                         {'maximumVelocity': 600.0, 'speakerVolume': 35})
        self.assertEqual(solution.triggered, ('low_noise',))
        self.assertGreater(solution.nodes, 0)

    def test_empty_battery_loud(self):
        """Test empty battery drops to the lowest speed."""

        solution = solve(self.cp, {'ctx_battery': 5, 'ctx_noise': 80})

        self.assertEqual(solution.bindings,
                         {'maximumVelocity': 100.0, 'speakerVolume': 85})
        self.assertEqual(solution.triggered, ('high_noise',))

    def test_objective_is_cost(self):
        """Test the reported objective equals the cost of the bindings."""

        context = {'ctx_battery': 40, 'ctx_noise': 50}
        solution = solve(self.cp, context)

        self.assertEqual(solution.objective,
                         evaluate_cost(self.cp, context, solution.bindings))

    def test_noise_table(self):
        """Test each noise level pins the matching volume."""

        expected = {0: 35, 19: 35, 20: 55, 69: 55, 70: 85, 100: 85}
        for noise, volume in expected.items():
            with self.subTest(noise=noise):
                solution = solve(self.cp,
                                 {'ctx_battery': 50, 'ctx_noise': noise})
                self.assertEqual(solution.bindings['speakerVolume'], volume)

    def test_clamped_context(self):
        """Test out of range contexts solve as their clamped value."""

        with self.assertLogs('solver', 'WARNING'):
            clamped = solve(self.cp, {'ctx_battery': 50, 'ctx_noise': 0})
        inside = solve(self.cp, {'ctx_battery': 50, 'ctx_noise': 5})

        self.assertEqual(clamped.bindings, inside.bindings)
        self.assertEqual(clamped.objective, inside.objective)
        self.assertEqual(clamped.clamped, ('ctx_noise',))
        self.assertEqual(inside.clamped, ())

    def test_rule_dominance(self):
        """Test bindings satisfy every rule whose guard holds."""

        for context in random_velocity_contexts(60, 3):
            solution = solve(self.cp, context)
            env = context_env(self.cp, make_snapshot(self.cp, context))
            for rule in self.cp.rules:
                if Evaluator().evaluate(rule.guard, env):
                    with self.subTest(context=context, rule=rule.name):
                        self.assertTrue(Evaluator().evaluate(
                            rule.relation, {**env, **solution.bindings}))

    def test_exact_objective(self):
        """Test the exact objective is solved and reported exactly."""

        context = {'ctx_battery': 26, 'ctx_noise': 50}
        solution = solve(self.cp, context, exact=True)

        self.assertEqual(solution, brute_force(self.cp, context, exact=True))
        self.assertEqual(
            solution.objective,
            evaluate_cost(self.cp, context, solution.bindings, exact=True))

    def test_incomplete_context(self):
        """Test solving without every context value is refused."""

        with self.assertRaises(IncompleteBinding):
            solve(self.cp, {'ctx_battery': 50})


class SolveCoffeeTests(SimpleTestCase):
    """Test solving the coffee machine models."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.cp = fixture('coffee_prose.vml')

    def test_low_battery_near_machine(self):
        """Test a low battery picks the nearer machine."""

        solution = solve(self.cp, {
            'ctx_battery': 10, 'ctx_distanceMachine_A': 2.0,
            'ctx_distanceMachine_B': 5.0, 'ctx_waitingTimeMachine_A': 200,
            'ctx_waitingTimeMachine_B': 20, 'ctx_maxAllowedVelocity': 300.0,
        })

        self.assertEqual(solution.bindings, {'coffeeMachine': 0})
        self.assertEqual(solution.labels,
                         {'coffeeMachine': 'COFFEE_MACHINE_A'})
        self.assertEqual(solution.triggered, ('lowBattery_NearMachineA',))
        self.assertEqual(solution.objective, 0.0)

    def test_decision_map_low_battery(self):
        """Test the nearer machine wins over a grid of distances."""

        base = {'ctx_battery': 10, 'ctx_waitingTimeMachine_A': 100,
                'ctx_waitingTimeMachine_B': 100,
                'ctx_maxAllowedVelocity': 400.0}
        for distance_a in range(20):
            for distance_b in range(20):
                context = {**base,
                           'ctx_distanceMachine_A': float(distance_a),
                           'ctx_distanceMachine_B': float(distance_b)}
                solution = solve(self.cp, context)
                expected = 'COFFEE_MACHINE_A' if distance_a < distance_b \
                    else 'COFFEE_MACHINE_B'
                self.assertEqual(solution.labels['coffeeMachine'], expected)

    def test_decision_map_high_battery(self):
        """Test the machine with the lower total time wins."""

        evaluator = Evaluator()
        for context in random_coffee_contexts(150, 7):
            context['ctx_battery'] = max(context['ctx_battery'], 15)
            solution = solve(self.cp, context)
            env = context_env(self.cp, make_snapshot(self.cp, context))
            time_a = evaluator.evaluate(self.cp.general_vars[0].expr, env)
            time_b = evaluator.evaluate(self.cp.general_vars[1].expr, env)
            expected = 'COFFEE_MACHINE_A' if time_a < time_b \
                else 'COFFEE_MACHINE_B'
            with self.subTest(context=context):
                self.assertEqual(solution.labels['coffeeMachine'], expected)

    def test_printed_rules_prefer_slower_machine(self):
        """Test the printed conditions pick the machine with more time."""

        cp = fixture('coffee.vml')
        solution = solve(cp, {
            'ctx_battery': 50, 'ctx_distanceMachine_A': 1.0,
            'ctx_distanceMachine_B': 1.0, 'ctx_waitingTimeMachine_A': 200,
            'ctx_waitingTimeMachine_B': 20, 'ctx_maxAllowedVelocity': 300.0,
        })

        self.assertEqual(solution.labels['coffeeMachine'], 'COFFEE_MACHINE_A')


class OracleParityTests(SimpleTestCase):
    """Test branch and bound agrees with exhaustive enumeration."""

    def assert_parity(self, cp, contexts):
        for context in contexts:
            searched = solve(cp, context)
            enumerated = brute_force(cp, context)
            with self.subTest(context=context):
                self.assertEqual(searched, enumerated)

    def test_velocity(self):
        """Test parity on random velocity contexts."""

        self.assert_parity(fixture('velocity.vml'),
                           random_velocity_contexts(200, 1))

    def test_coffee(self):
        """Test parity on random coffee contexts."""

        contexts = random_coffee_contexts(200, 2)
        self.assert_parity(fixture('coffee_prose.vml'), contexts)
        self.assert_parity(fixture('coffee.vml'), contexts)

    def test_coupled_variables(self):
        """Test parity with a constraint over two variation points."""

        cp = problem_from(COUPLED)
        self.assert_parity(cp, [{'c': c} for c in range(11)])

        solution = solve(cp, {'c': 10})
        self.assertEqual(solution.bindings, {'x': 0, 'y': 5})

    def test_product_term(self):
        """Test parity with a definition nonlinear in two variables."""

        self.assert_parity(problem_from(PRODUCT),
                           [{'c': c} for c in range(11)])


class RescaledDefinitionTests(SimpleTestCase):
    """Test positive affine rescaling of definitions keeps the optimum."""

    RESCALINGS = [
        ('exp(maximumVelocity / 150)', '3 * exp(maximumVelocity / 150) + 7'),
        ('f(maximumVelocity) = maximumVelocity;',
         'f(maximumVelocity) = 0.5 * maximumVelocity - 20;'),
    ]

    def setUp(self):
        self.source = (settings.VML_MODELS_DIR / 'velocity.vml').read_text(
            encoding='utf-8')
        self.contexts = random_velocity_contexts(50, 3)

    def test_bindings_unchanged(self):
        """Test a*f + b with a > 0 selects the same bindings."""

        original = problem_from(self.source)
        for old, new in self.RESCALINGS:
            self.assertIn(old, self.source)
            rescaled = problem_from(self.source.replace(old, new))
            for exact in (False, True):
                for context in self.contexts:
                    with self.subTest(rescaled=new, exact=exact,
                                      context=context):
                        self.assertEqual(
                            solve(rescaled, context, exact=exact).bindings,
                            solve(original, context, exact=exact).bindings)


class EdgeCaseTests(SimpleTestCase):
    """Test infeasibility, trivial problems and size limits."""

    def test_conflicting_rules(self):
        """Test conflicting triggered rules make the problem infeasible."""

        cp = problem_from(CONFLICT)

        for method in (solve, brute_force):
            with self.subTest(method=method.__name__):
                solution = method(cp, {'c': 5})
                self.assertIs(solution.status, SolutionStatus.INFEASIBLE)
                self.assertFalse(solution.is_optimal)
                self.assertIsNone(solution.objective)
                self.assertEqual(solution.bindings, {})
                self.assertEqual(solution.triggered, ('one', 'two'))
                self.assertIn('one, two', str(solution))

    def test_conflict_not_triggered(self):
        """Test the same rules are harmless when their guards fail."""

        solution = solve(problem_from(CONFLICT), {'c': 2})

        self.assertIs(solution.status, SolutionStatus.OPTIMAL)
        self.assertEqual(solution.bindings, {'x': 0})

    def test_identity_minimum(self):
        """Test a minimized identity binds the domain minimum."""

        cp = problem_from(IDENTITY)

        self.assertEqual(solve(cp, {'c': 10}).bindings, {'x': 0})
        self.assertEqual(brute_force(cp, {'c': 10}).bindings, {'x': 0})

    def test_zero_weight_tie_break(self):
        """Test a zero weight leaves every value tied at the smallest."""

        solution = solve(problem_from(IDENTITY), {'c': 0})

        self.assertEqual(solution.bindings, {'x': 0})
        self.assertEqual(solution.objective, 0.0)

    def test_domain_too_large(self):
        """Test the oracle refuses joint domains over its limit."""

        cp = fixture('velocity.vml')

        with self.assertRaises(DomainTooLarge):
            brute_force(cp, {'ctx_battery': 50, 'ctx_noise': 50}, limit=1000)
