from evolutions.verification import verify_mono_projection, verify_third_noise
from measures.laws import example_law
from reports.analysis import analyze_law
from reports.builders import add_verification, analysis_report
from reports.configs import simulation_config
from reports.management.base import ReportCommand


class Command(ReportCommand):
    help = ('Analyse and simulate the built-in two-map law (delta_f + delta_g)/2 on five '
            'points, f = [2,3,4,1,5], g = [2,5,5,2,4], with a fixed seed.')
    command_name = 'example'
    needs_law = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--replications', type=int, help='Independent paths to simulate.')

    def build(self, law, options):
        analysis = analyze_law(example_law())
        config = simulation_config(analysis, options)
        report = analysis_report(analysis, command=self.command_name, seed=config.seed,
                                 source='built-in', timestamp=not options['no_timestamp'])
        report['simulation'] = config.to_json()
        return add_verification(report, [verify_third_noise(analysis, config),
                                         verify_mono_projection(analysis, config)])
