"""
Tests for solver result serializers.
"""
import json

from django.conf import settings
from django.test import SimpleTestCase
from rest_framework.renderers import JSONRenderer

from analysis.loading import load_model
from compiler.lowering import lower
from solver.search import solve
from solver.serializers import SolutionSerializer


class SolutionSerializerTests(SimpleTestCase):
    """Test JSON rendering of Solutions."""

    def test_coffee_solution(self):
        """Test bindings are rendered by enum literal name."""

        cp = lower(load_model(settings.VML_MODELS_DIR / 'coffee_prose.vml'))
        solution = solve(cp, {
            'ctx_battery': 10, 'ctx_distanceMachine_A': 2.0,
            'ctx_distanceMachine_B': 5.0, 'ctx_waitingTimeMachine_A': 30,
            'ctx_waitingTimeMachine_B': 20, 'ctx_maxAllowedVelocity': 300.0,
        })

        data = json.loads(
            JSONRenderer().render(SolutionSerializer(solution).data))

        self.assertEqual(data['model'], 'coffee_prose')
        self.assertEqual(data['status'], 'optimal')
        self.assertEqual(data['bindings'],
                         {'coffeeMachine': 'COFFEE_MACHINE_A'})
        self.assertEqual(data['objective'], 0.0)
        self.assertEqual(data['triggered'], ['lowBattery_NearMachineA'])
        self.assertEqual(data['context']['ctx_battery'], 10)
        self.assertEqual(data['clamped'], [])
