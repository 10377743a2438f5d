"""
Django command to sweep one context of a VML model.
"""
from functools import partial

from django.core.management.base import CommandError

from runtime.cli import (
    USAGE_EXIT,
    VMLCommand,
    csv_text,
    load_problem,
    parse_assignments,
    reported,
    write_output,
)
from solver.sweep import sweep, sweep_grid, write_sweep_csv


class Command(VMLCommand):
    """Django command to solve a model over a range of one context."""

    help = 'Solve a VML model for each value of one context, as CSV.'

    def add_arguments(self, parser):
        parser.add_argument('file')
        parser.add_argument('--vary', required=True)
        parser.add_argument('--from', dest='start', type=float)
        parser.add_argument('--to', dest='stop', type=float)
        parser.add_argument('--step', type=float)
        parser.add_argument('--ctx', nargs='+', action='extend', default=[],
                            metavar='NAME=VALUE')
        parser.add_argument('--segments', type=int, default=None)
        parser.add_argument('--exact-objective', action='store_true',
                            default=None)
        parser.add_argument('-o', '--output', default=None)

    def handle(self, *args, **options):
        """Entrypoint for command."""

        bounds = [options[key] for key in ('start', 'stop', 'step')]
        if any(value is not None for value in bounds) \
                and None in bounds:
            raise CommandError('Give all of --from, --to and --step, or none.',
                               returncode=USAGE_EXIT)
        cp = load_problem(self, options['file'], options['segments'])
        fixed = parse_assignments(options['ctx'])
        with reported(self, options['file']):
            cp.parameter(options['vary'])
            grid = sweep_grid(*bounds) if None not in bounds else None
            rows = sweep(cp, options['vary'], grid, fixed,
                         exact=options['exact_objective'])

        write_output(self, csv_text(partial(write_sweep_csv, cp, rows)),
                     options['output'])
