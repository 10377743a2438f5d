"""
Test the VML management commands.
"""
import json
import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from runtime.management.commands.vml_sweep import Command as SweepCommand

VELOCITY = str(settings.VML_MODELS_DIR / 'velocity.vml')
COFFEE = str(settings.VML_MODELS_DIR / 'coffee_prose.vml')
MANIFEST = str(settings.VML_MODELS_DIR / 'pipeline.json')
SCENARIO = str(settings.VML_MODELS_DIR / 'battery_drain.scenario')

COFFEE_CONTEXT = [
    'ctx_battery=10', 'ctx_maxAllowedVelocity=400',
    'ctx_distanceMachine_A=2', 'ctx_distanceMachine_B=5',
    'ctx_waitingTimeMachine_A=60', 'ctx_waitingTimeMachine_B=20',
]

CONFLICT = '''
number p { range: [0,10]; precision: 1; }
context c : p;
varpoint x : p;
rule one : c > 3 => x = 1;
rule two : c > 3 => x = 2;
'''

PRODUCT = '''
number p { range: [0,10]; precision: 1; }
context c : p;
varpoint x : p;
varpoint y : p;
property cost : p minimized {
  priorities: f(c) = c;
  definitions: f(x, y) = x * y; }
'''


def run(*args):
    """Run a command; returns its stdout and stderr text."""
    stdout, stderr = StringIO(), StringIO()
    call_command(*args, stdout=stdout, stderr=stderr)
    return stdout.getvalue(), stderr.getvalue()


class CommandTestCase(SimpleTestCase):
    """Base class with a scratch directory for model files."""

    def setUp(self):
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.directory = Path(directory.name)

    def model_file(self, name, text):
        path = self.directory / name
        path.write_text(text, encoding='utf-8')
        return str(path)

    def assert_exit(self, code, *args):
        """Assert running `args` fails with exit status `code`."""
        with self.assertRaises(CommandError) as context:
            run(*args)
        self.assertEqual(context.exception.returncode, code)
        return context.exception


class CheckCommandTests(CommandTestCase):
    """Test vml_check."""

    def test_valid_models(self):
        """Test valid models are reported OK."""

        stdout, stderr = run('vml_check', VELOCITY, COFFEE)

        self.assertIn(f'{VELOCITY}: OK', stdout)
        self.assertIn(f'{COFFEE}: OK', stdout)
        self.assertEqual(stderr, '')

    def test_syntax_error(self):
        """Test a broken model prints diagnostics and exits with 1."""

        broken = self.model_file('broken.vml', 'number p { range: [0,10]')

        error = self.assert_exit(1, 'vml_check', VELOCITY, broken)

        self.assertIn('1 file(s) with errors', str(error))

    def test_missing_file(self):
        """Test a missing file is a usage error."""

        self.assert_exit(3, 'vml_check', str(self.directory / 'none.vml'))

    def test_invalid_utf8(self):
        """Test a file that is not UTF-8 is reported as a diagnostic."""

        path = self.directory / 'binary.vml'
        path.write_bytes(b'\xff\xfe')
        stderr = StringIO()

        with self.assertRaises(CommandError) as context:
            call_command('vml_check', str(path), stdout=StringIO(),
                         stderr=stderr)

        self.assertEqual(context.exception.returncode, 1)
        self.assertIn(f'{path}:1:1: error[UnknownCharacter]',
                      stderr.getvalue())

    def test_invalid_utf8_solve(self):
        """Test solving a file that is not UTF-8 exits with 1."""

        path = self.directory / 'binary.vml'
        path.write_bytes(b'\xff\xfe')

        self.assert_exit(1, 'vml_solve', str(path))


class CompileCommandTests(CommandTestCase):
    """Test vml_compile."""

    def test_stdout(self):
        """Test the MiniZinc model is written to stdout."""

        stdout, _ = run('vml_compile', VELOCITY)

        self.assertTrue(stdout.startswith(
            '% MiniZinc model generated from VML model velocity\n'))
        self.assertIn('solve minimize', stdout)

    def test_output_file(self):
        """Test -o writes the model to a file."""

        target = self.directory / 'velocity.mzn'

        stdout, stderr = run('vml_compile', VELOCITY, '-o', str(target))

        self.assertEqual(stdout, '')
        self.assertIn('Wrote', stderr)
        self.assertEqual(target.read_text(encoding='utf-8'),
                         run('vml_compile', VELOCITY)[0])

    def test_nonlinear_definition(self):
        """Test a product of variation points cannot be compiled."""

        path = self.model_file('product.vml', PRODUCT)

        self.assert_exit(1, 'vml_compile', path)


class SolveCommandTests(CommandTestCase):
    """Test vml_solve."""

    def test_text(self):
        """Test the bindings are printed for a context."""

        stdout, _ = run('vml_solve', VELOCITY,
                        '--ctx', 'ctx_battery=100', 'ctx_noise=10')

        self.assertIn('maximumVelocity=600.0', stdout)
        self.assertIn('speakerVolume=35', stdout)
        self.assertIn('(objective -100)', stdout)

    def test_repeated_ctx(self):
        """Test --ctx may be given several times."""

        stdout, _ = run('vml_solve', COFFEE, '--ctx', *COFFEE_CONTEXT[:3],
                        '--ctx', *COFFEE_CONTEXT[3:])

        self.assertIn('coffeeMachine=COFFEE_MACHINE_A', stdout)

    def test_json(self):
        """Test --json prints the serialized solution."""

        stdout, _ = run('vml_solve', COFFEE, '--json', '--brute-force',
                        '--ctx', *COFFEE_CONTEXT)

        data = json.loads(stdout)
        self.assertEqual(data['model'], 'coffee_prose')
        self.assertEqual(data['status'], 'optimal')
        self.assertEqual(data['bindings'],
                         {'coffeeMachine': 'COFFEE_MACHINE_A'})

    def test_infeasible(self):
        """Test an infeasible context exits with 2."""

        path = self.model_file('conflict.vml', CONFLICT)

        error = self.assert_exit(2, 'vml_solve', path, '--ctx', 'c=5')

        self.assertIn('infeasible', str(error))

    def test_usage_errors(self):
        """Test missing contexts and malformed arguments exit with 3."""

        cases = [
            ('vml_solve', VELOCITY, '--ctx', 'ctx_battery=100'),
            ('vml_solve', VELOCITY, '--ctx', 'ctx_battery'),
            ('vml_solve', str(self.directory / 'none.vml')),
        ]
        for args in cases:
            with self.subTest(args=args):
                self.assert_exit(3, *args)


class SweepCommandTests(CommandTestCase):
    """Test vml_sweep."""

    def test_whole_domain(self):
        """Test the sweep covers the context domain by default."""

        stdout, _ = run('vml_sweep', VELOCITY, '--vary', 'ctx_battery',
                        '--ctx', 'ctx_noise=10')

        lines = stdout.splitlines()
        self.assertEqual(len(lines), 97)
        self.assertEqual(
            lines[0],
            'context_value,maximumVelocity,speakerVolume,objective,status')

    def test_explicit_grid(self):
        """Test --from, --to and --step choose the swept values."""

        stdout, _ = run('vml_sweep', VELOCITY, '--vary', 'ctx_battery',
                        '--from', '10', '--to', '100', '--step', '10',
                        '--ctx', 'ctx_noise=10')

        lines = stdout.splitlines()
        self.assertEqual(len(lines), 11)
        self.assertTrue(lines[1].startswith('10'))
        self.assertTrue(lines[-1].startswith('100'))

    def test_partial_bounds(self):
        """Test giving only some grid bounds is a usage error."""

        self.assert_exit(3, 'vml_sweep', VELOCITY, '--vary', 'ctx_battery',
                         '--from', '10')

    def test_unknown_context(self):
        """Test sweeping an undeclared context is a usage error."""

        self.assert_exit(3, 'vml_sweep', VELOCITY, '--vary', 'ctx_light')


class SimulateCommandTests(CommandTestCase):
    """Test vml_simulate."""

    def test_battery_drain(self):
        """Test the timeline CSV of the shipped scenario."""

        stdout, _ = run('vml_simulate', MANIFEST, SCENARIO)

        lines = stdout.splitlines()
        self.assertEqual(len(lines), 17)
        self.assertEqual(lines[0],
                         'tick,trigger,model,bindings,objective,status')
        self.assertTrue(lines[1].startswith(
            '0,query,velocity,maximumVelocity=600.0;speakerVolume=35,'))

    def test_bad_script(self):
        """Test an unreadable script exits with 3."""

        script = self.model_file('bad.scenario', '5 jump\n')

        error = self.assert_exit(3, 'vml_simulate', MANIFEST, script)

        self.assertIn('line 1', str(error))


class UsageTests(CommandTestCase):
    """Test argument errors of every command."""

    def test_missing_arguments(self):
        """Test a missing required argument exits with 3."""

        cases = [
            ('vml_check',),
            ('vml_compile',),
            ('vml_solve',),
            ('vml_sweep', VELOCITY),
            ('vml_simulate', MANIFEST),
        ]
        for args in cases:
            with self.subTest(args=args):
                error = self.assert_exit(3, *args)

                self.assertIn('required', str(error))

    def test_bad_option_value(self):
        """Test an option of the wrong type exits with 3."""

        self.assert_exit(3, 'vml_compile', VELOCITY, '--segments', 'many')

    def test_command_line(self):
        """Test the command line exits with status 3 on a usage error."""

        command = SweepCommand()

        with patch('sys.stderr', new_callable=StringIO) as stderr:
            with self.assertRaises(SystemExit) as context:
                command.run_from_argv(['manage.py', 'vml_sweep', VELOCITY])

        self.assertEqual(context.exception.code, 3)
        self.assertIn('--vary', stderr.getvalue())
