"""
Helpers shared by the VML management commands.
"""

import io
import sys
from contextlib import contextmanager
from pathlib import Path

from django.core.management.base import (
    BaseCommand,
    CommandError,
    CommandParser,
)

from core.exceptions import DiagnosticError, NonLinearizedTerm, VMLError

from analysis.loading import load_model
from compiler.lowering import lower

DIAGNOSTICS_EXIT = 1
INFEASIBLE_EXIT = 2
USAGE_EXIT = 3


class UsageErrorParser(CommandParser):
    """A CommandParser whose argument errors exit with USAGE_EXIT."""

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(USAGE_EXIT, f'{self.prog}: error: {message}\n')
        raise CommandError(f'Error: {message}', returncode=USAGE_EXIT)


class VMLCommand(BaseCommand):
    """Base class of the vml_* commands."""

    requires_system_checks = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # BaseCommand builds a plain CommandParser.
        parser.__class__ = UsageErrorParser
        return parser


def existing_file(name):
    path = Path(name)
    if not path.is_file():
        raise CommandError(f'{path} does not exist.', returncode=USAGE_EXIT)
    return path


def parse_assignments(items):
    """`name=value` arguments as a dict of raw values."""
    values = {}
    for item in items or ():
        name, sign, value = item.partition('=')
        if not sign or not name or not value:
            raise CommandError(f'Expected name=value, got {item!r}.',
                               returncode=USAGE_EXIT)
        values[name] = value
    return values


def write_diagnostics(command, diagnostics, filename):
    for diagnostic in diagnostics:
        style = command.style.ERROR if diagnostic.is_error \
            else command.style.WARNING
        command.stderr.write(diagnostic.render(filename), style_func=style)


@contextmanager
def reported(command, filename='<input>'):
    """Turn toolchain errors into CommandErrors with their exit codes."""
    try:
        yield
    except DiagnosticError as error:
        write_diagnostics(command, error.diagnostics, filename)
        raise CommandError(f'{filename}: {error}',
                           returncode=DIAGNOSTICS_EXIT) from error
    except NonLinearizedTerm as error:
        raise CommandError(f'{filename}: {error}',
                           returncode=DIAGNOSTICS_EXIT) from error
    except (VMLError, ValueError, KeyError, OSError) as error:
        raise CommandError(str(error), returncode=USAGE_EXIT) from error


def load_problem(command, name, segments=None):
    """Load, analyze and lower a model file, reporting its diagnostics."""
    path = existing_file(name)
    with reported(command, str(path)):
        cp = lower(load_model(path), segments=segments)
    write_diagnostics(command, cp.warnings, str(path))
    return cp


def write_output(command, text, output=None):
    """Write `text` to the file `output`, or to stdout without one."""
    if output in (None, '-'):
        command.stdout.write(text, ending='')
        return
    Path(output).write_text(text, encoding='utf-8')
    command.stderr.write(command.style.SUCCESS(f'Wrote {output}.'))


def csv_text(write):
    """The text `write(stream)` writes."""
    buffer = io.StringIO()
    write(buffer)
    return buffer.getvalue()
