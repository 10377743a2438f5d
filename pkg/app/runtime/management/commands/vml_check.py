"""
Django command to check VML models.
"""
from django.core.management.base import CommandError

from core.diagnostics import has_errors
from core.exceptions import DiagnosticError

from analysis.loading import check_source, read_source
from compiler.lowering import lower
from runtime.cli import (
    DIAGNOSTICS_EXIT,
    VMLCommand,
    existing_file,
    write_diagnostics,
)


class Command(VMLCommand):
    """Django command to parse and analyze VML files."""

    help = 'Parse and analyze VML models, printing their diagnostics.'

    def add_arguments(self, parser):
        parser.add_argument('files', nargs='+')

    def _diagnostics(self, path):
        try:
            text = read_source(path)
        except DiagnosticError as error:
            return error.diagnostics
        tm, diagnostics = check_source(text, path.stem)
        if tm is None:
            return diagnostics
        try:
            return diagnostics + list(lower(tm).warnings)
        except DiagnosticError as error:
            return diagnostics + error.diagnostics

    def handle(self, *args, **options):
        """Entrypoint for command."""

        failed = 0
        for name in options['files']:
            path = existing_file(name)
            diagnostics = self._diagnostics(path)
            write_diagnostics(self, diagnostics, str(path))
            if has_errors(diagnostics):
                failed += 1
            else:
                self.stdout.write(self.style.SUCCESS(f'{path}: OK'))

        if failed:
            raise CommandError(f'{failed} file(s) with errors.',
                               returncode=DIAGNOSTICS_EXIT)
