"""
Django command to compile a VML model to MiniZinc.
"""

from compiler.minizinc import emit_minizinc
from runtime.cli import VMLCommand, load_problem, reported, write_output


class Command(VMLCommand):
    """Django command to emit the MiniZinc model of a VML file."""

    help = 'Compile a VML model into a MiniZinc model.'

    def add_arguments(self, parser):
        parser.add_argument('file')
        parser.add_argument('-o', '--output', default=None)
        parser.add_argument('--segments', type=int, default=None,
                            help='Chord segments per nonlinear definition.')

    def handle(self, *args, **options):
        """Entrypoint for command."""

        cp = load_problem(self, options['file'], options['segments'])
        with reported(self, options['file']):
            text = emit_minizinc(cp)
        write_output(self, text, options['output'])
