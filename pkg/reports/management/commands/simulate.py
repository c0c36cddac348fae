from evolutions.verification import verify_third_noise
from reports.analysis import analyze_law
from reports.builders import add_verification, analysis_report
from reports.configs import simulation_config
from reports.management.base import ReportCommand, add_simulation_arguments


class Command(ReportCommand):
    help = ('Simulate replicated evolutions of a mapping law and check the third noise, '
            'the remote past and the path invariants.')
    command_name = 'simulate'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_simulation_arguments(parser)

    def build(self, law, options):
        analysis = analyze_law(law, oracle=False)
        config = simulation_config(analysis, options)
        report = analysis_report(analysis, command=self.command_name, seed=config.seed,
                                 source=options['law'], timestamp=not options['no_timestamp'],
                                 Lambda_W=config.Lambda_W)
        report['simulation'] = config.to_json()
        return add_verification(report, [verify_third_noise(analysis, config)])
