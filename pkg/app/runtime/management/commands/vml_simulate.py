"""
Django command to replay a scenario on a pipeline of VML models.
"""

from runtime.cli import (
    VMLCommand,
    csv_text,
    existing_file,
    reported,
    write_output,
)
from runtime.engine import AdaptationEngine
from runtime.manifest import load_manifest
from runtime.scenario import load_script, run_scenario


class Command(VMLCommand):
    """Django command to run a scenario script against a manifest."""

    help = 'Replay a scenario script and write the binding timeline as CSV.'

    def add_arguments(self, parser):
        parser.add_argument('manifest')
        parser.add_argument('script')
        parser.add_argument('--exact-objective', action='store_true',
                            default=None)
        parser.add_argument('-o', '--output', default=None)

    def handle(self, *args, **options):
        """Entrypoint for command."""

        manifest_path = existing_file(options['manifest'])
        script_path = existing_file(options['script'])
        with reported(self, str(manifest_path)):
            manifest = load_manifest(manifest_path)
        with reported(self, str(script_path)):
            engine = AdaptationEngine.from_manifest(
                manifest, exact=options['exact_objective'])
            timeline = run_scenario(engine, load_script(script_path))

        write_output(self, csv_text(timeline.write_csv), options['output'])
