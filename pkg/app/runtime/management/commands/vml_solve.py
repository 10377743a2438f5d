"""
Django command to solve a VML model for one context.
"""
from django.core.management.base import CommandError
from rest_framework.renderers import JSONRenderer

from runtime.cli import (
    INFEASIBLE_EXIT,
    VMLCommand,
    load_problem,
    parse_assignments,
    reported,
)
from solver.search import brute_force, solve
from solver.serializers import SolutionSerializer


class Command(VMLCommand):
    """Django command to find the optimal variation point bindings."""

    help = 'Solve a VML model for the given context values.'

    def add_arguments(self, parser):
        parser.add_argument('file')
        parser.add_argument('--ctx', nargs='+', action='extend', default=[],
                            metavar='NAME=VALUE')
        parser.add_argument('--segments', type=int, default=None)
        parser.add_argument('--exact-objective', action='store_true',
                            default=None)
        parser.add_argument('--brute-force', action='store_true')
        parser.add_argument('--json', action='store_true')

    def handle(self, *args, **options):
        """Entrypoint for command."""

        cp = load_problem(self, options['file'], options['segments'])
        context = parse_assignments(options['ctx'])
        method = brute_force if options['brute_force'] else solve
        with reported(self, options['file']):
            solution = method(cp, context, exact=options['exact_objective'])

        if options['json']:
            self.stdout.write(
                JSONRenderer().render(SolutionSerializer(solution).data)
                .decode())
        else:
            self.stdout.write(str(solution))
        if not solution.is_optimal:
            raise CommandError(f'{cp.name} is infeasible.',
                               returncode=INFEASIBLE_EXIT)
