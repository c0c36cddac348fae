from reports.analysis import analyze_law
from reports.builders import analysis_report
from reports.management.base import ReportCommand


class Command(ReportCommand):
    help = ('Structural analysis of a mapping law: semigroup, kernel, Rees decomposition, '
            'convolution limits, F-cliques and invariant laws.')
    command_name = 'analyze'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--no-oracle', action='store_true',
                            help='Skip the float oracle and the running-average check.')

    def build(self, law, options):
        analysis = analyze_law(law, oracle=not options['no_oracle'])
        return analysis_report(analysis, command=self.command_name, seed=options['seed'],
                               source=options['law'], timestamp=not options['no_timestamp'])
