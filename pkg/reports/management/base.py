# reports/management/base.py
"""What the mapevo commands share: law loading, output, --save and exit codes.

Exit codes: 0 every check passed, 1 a statistical check failed,
2 a structural or exact check failed, 3 bad input.
"""
import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from mapevo.exceptions import MapEvoError
from measures.laws import load_law
from reports.builders import dumps_report
from reports.models import AnalysisRun
from reports.rendering import render_text

logger = logging.getLogger(__name__)


class ReportCommand(BaseCommand):
    command_name = None
    needs_law = True

    def add_arguments(self, parser):
        if self.needs_law:
            parser.add_argument('--law', required=True, help='Mapping law JSON file.')
        parser.add_argument('--out', help='Write the report to this file instead of stdout.')
        parser.add_argument('--seed', type=int, help='Seed of the random streams (0 <= seed < 2**64).')
        parser.add_argument('--no-timestamp', action='store_true',
                            help='Leave out generated_at so equal runs give identical output.')
        formats = parser.add_mutually_exclusive_group()
        formats.add_argument('--json', dest='format', action='store_const', const='json',
                             help='JSON report (default).')
        formats.add_argument('--text', dest='format', action='store_const', const='text',
                             help='Human-readable rendering of the JSON report.')
        parser.set_defaults(format='json')
        parser.add_argument('--save', action='store_true',
                            help='Store the report as an AnalysisRun in the database.')

    def build(self, law, options):
        """Return the report dict; report['exit_code'] decides the process status."""
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            law = load_law(options['law']) if self.needs_law else None
            report = self.build(law, options)
        except MapEvoError as exc:
            raise CommandError(str(exc), returncode=exc.exit_code) from exc

        text = dumps_report(report) if options['format'] != 'text' else render_text(report)
        out = options.get('out')
        if out:
            try:
                Path(out).write_text(text + '\n', encoding='utf-8')
            except OSError as exc:
                raise CommandError(f"cannot write {out}: {exc.strerror}", returncode=3) from exc
            logger.info(f"report written to {out}")
        else:
            self.stdout.write(text)

        exit_code = report['exit_code']
        if options['save']:
            run = AnalysisRun.objects.create(
                command=self.command_name,
                law=report['input'],
                seed='' if report['seed'] is None else str(report['seed']),
                exit_code=exit_code,
                report=report,
            )
            logger.info(f"saved {run}")
        if exit_code:
            failed = [c['name'] for section in report['verification'] for c in section['checks']
                      if c['gating'] and not c['passed']]
            raise CommandError(f"{self.command_name}: failed checks: {'; '.join(failed)}",
                               returncode=exit_code)


def add_simulation_arguments(parser):
    parser.add_argument('--config', help='Simulation config JSON file; flags override it.')
    parser.add_argument('--replications', type=int, help='Independent paths to simulate.')
    parser.add_argument('--alpha', type=float, help='Significance level of the statistical checks.')
    parser.add_argument('--k-min', type=int, help='First time of each path.')
    parser.add_argument('--k-max', type=int, help='Last time of each path.')
    parser.add_argument('--k', type=int, help='Observation time (defaults to k-max).')
    parser.add_argument('--window', type=int, help='Width of the driving-noise window.')
    parser.add_argument('--mode', choices=['stationary', 'nonstationary'],
                        help='Start from the invariant law or from a family (config file).')
