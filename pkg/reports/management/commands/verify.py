from evolutions.verification import verify_mixing, verify_mono_projection, verify_third_noise
from reports.analysis import analyze_law
from reports.builders import add_verification, analysis_report
from reports.configs import simulation_config
from reports.management.base import ReportCommand, add_simulation_arguments


class Command(ReportCommand):
    help = ('Every check at once: oracle agreement, third noise, mono-particle '
            'projection (stationary runs) and mixing of the H-part.')
    command_name = 'verify'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        add_simulation_arguments(parser)

    def build(self, law, options):
        analysis = analyze_law(law)
        config = simulation_config(analysis, options)
        report = analysis_report(analysis, command=self.command_name, seed=config.seed,
                                 source=options['law'], timestamp=not options['no_timestamp'],
                                 Lambda_W=config.Lambda_W)
        report['simulation'] = config.to_json()
        verifications = [verify_third_noise(analysis, config)]
        if config.mode == 'stationary':
            verifications.append(verify_mono_projection(analysis, config))
        verifications.append(verify_mixing(analysis, config))
        return add_verification(report, verifications)
