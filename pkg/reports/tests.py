import json
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase

from mapevo.exceptions import InputError
from measures.laws import cyclic_law, example_law, law_from_literals
from .analysis import analyze_law
from .builders import analysis_report, dumps_report
from .configs import parse_config
from .models import AnalysisRun
from .rendering import render_text

EXAMPLE = {'n': 5, 'generators': [[2, 3, 4, 1, 5], [2, 5, 5, 2, 4]], 'weights': ['1/2', '1/2']}
CYCLIC = {'n': 3, 'generators': [[2, 3, 1]], 'weights': ['1']}


class LawFilesMixin:

    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.tmp = Path(self._tmp.name)

    def tearDown(self):
        self._tmp.cleanup()
        super().tearDown()

    def write(self, name, data):
        path = self.tmp / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding='utf-8')
        return str(path)

    def run_command(self, *args):
        out = StringIO()
        call_command(*args, stdout=out)
        return out.getvalue()


class ReportBuilderTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.analysis = analyze_law(example_law())
        cls.report = analysis_report(cls.analysis, timestamp=False)

    def test_worked_example(self):
        report = self.report
        self.assertEqual(report['semigroup']['m_mu'], 3)
        self.assertEqual(report['limits']['eta_L'], {'[4,2,2,4,5]': '2/3', '[1,3,3,1,5]': '1/3'})
        self.assertEqual(report['limits']['eta_R'], {'[4,2,2,4,5]': '2/3', '[2,2,4,4,5]': '1/3'})
        self.assertEqual(report['limits']['p'], 1)
        self.assertTrue(report['limits']['eta_equals_nu'])
        self.assertEqual(report['rees']['e'], '[4,2,2,4,5]')
        self.assertEqual(set(report['rees']['L']), {'[4,2,2,4,5]', '[1,3,3,1,5]'})
        self.assertEqual(set(report['rees']['R']), {'[4,2,2,4,5]', '[2,2,4,4,5]'})
        self.assertEqual(len(report['rees']['G']), 6)
        self.assertTrue(report['rees']['H_equals_G'])
        self.assertEqual(report['cliques']['W'], [[2, 4, 5]])
        self.assertEqual(report['cliques']['W_mu_size'], 12)
        self.assertEqual(report['cliques']['deadlocked_tuples_size'], 12)
        self.assertEqual(report['cliques']['example_projections']['(3,5,1)'],
                         ['[1,3,3,1,5]', '[5,2,2,5,4]', '(2,4,5)'])
        self.assertEqual(report['invariant_law']['lambda'], ['1/9', '2/9', '1/9', '2/9', '1/3'])
        self.assertEqual(report['exit_code'], 0)
        self.assertNotIn('generated_at', report)

    def test_transition_matrix_rows_sum_to_one(self):
        for row in self.report['invariant_law']['transition_matrix']:
            self.assertEqual(sum(Fraction(q) for q in row), 1)

    def test_oracle_and_running_average(self):
        oracle = self.report['limits']['oracle']
        self.assertTrue(oracle['converged'])
        self.assertEqual(oracle['p_est'], 1)
        self.assertLess(oracle['eta_distance'], 1e-9)
        coarse, fine = self.report['limits']['cesaro']['distance']
        self.assertLess(fine, 1e-3)
        self.assertLess(fine, coarse)
        structure = self.report['verification'][0]
        self.assertEqual(structure['name'], 'structure')
        self.assertTrue(structure['passed'])

    def test_report_is_deterministic_and_json(self):
        again = analysis_report(analyze_law(example_law()), timestamp=False)
        self.assertEqual(dumps_report(again), dumps_report(self.report))
        self.assertEqual(json.loads(dumps_report(self.report)), self.report)

    def test_text_is_rendered_from_the_report(self):
        text = render_text(self.report)
        self.assertIn('eta = nu', text)
        self.assertIn('H = G', text)
        self.assertIn('lambda = (1/9, 2/9, 1/9, 2/9, 1/3)', text)

    def test_deadlocked_sets_outside_W_mu_are_counted(self):
        report = analysis_report(analyze_law(law_from_literals(['[1,2,1,2]'], ['1'])),
                                 timestamp=False)
        cliques = report['cliques']
        self.assertEqual(cliques['f_cliques'], [[1, 2]])
        self.assertEqual(cliques['W_mu_size'], 2)
        self.assertEqual(cliques['deadlocked_sets'], [[1, 2], [1, 4], [2, 3], [3, 4]])
        self.assertEqual(cliques['deadlocked_tuples_size'], 8)
        self.assertIn('|W_mu| = 2, 8 deadlocked m_mu-tuples', render_text(report))

    def test_periodic_law(self):
        report = analysis_report(analyze_law(cyclic_law(3)), timestamp=False)
        self.assertEqual(report['limits']['p'], 3)
        self.assertFalse(report['limits']['eta_equals_nu'])
        self.assertEqual(report['limits']['oracle']['p_est'], 3)
        self.assertIn('cycles with period 3', render_text(report))


class ConfigFileTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.analysis = analyze_law(cyclic_law(3), oracle=False)

    def test_family(self):
        fields = parse_config({
            'mode': 'nonstationary',
            'family': {'c': ['1/2', '1/2', '0'],
                       'Lambda_W': [{'(1,2,3)': '1'}, {'(1,3,2)': '1'}, {'(1,2,3)': '1'}]},
        }, self.analysis)
        self.assertEqual(fields['mode'], 'nonstationary')
        self.assertEqual(fields['family'].p, 3)

    def test_bad_configs(self):
        with self.assertRaises(InputError):
            parse_config({'replication': 10}, self.analysis)
        with self.assertRaises(InputError):
            parse_config({'Lambda_W': {'(1,2,3)': '1/2'}}, self.analysis)
        with self.assertRaises(InputError):
            parse_config({'Lambda_W': {'(1,2,4)': '1'}}, self.analysis)
        with self.assertRaises(InputError):
            parse_config({'mixing_lengths': [5, 0]}, self.analysis)


class AnalyzeCommandTests(LawFilesMixin, TestCase):

    def test_example_law_file(self):
        path = self.write('law.json', EXAMPLE)
        report = json.loads(self.run_command('analyze', '--law', path, '--no-timestamp'))
        self.assertEqual(report['semigroup']['m_mu'], 3)
        self.assertEqual(report['limits']['eta_L'], {'[4,2,2,4,5]': '2/3', '[1,3,3,1,5]': '1/3'})
        self.assertEqual(report['limits']['p'], 1)
        self.assertEqual(report['cliques']['W'], [[2, 4, 5]])
        self.assertEqual(report['input']['source'], path)

    def test_same_input_same_output(self):
        path = self.write('law.json', EXAMPLE)
        first = self.run_command('analyze', '--law', path, '--no-timestamp')
        second = self.run_command('analyze', '--law', path, '--no-timestamp')
        self.assertEqual(first, second)
        self.assertIn('generated_at', json.loads(self.run_command('analyze', '--law', path)))

    def test_identity_law(self):
        path = self.write('id.json', {'n': 3, 'generators': [[1, 2, 3]], 'weights': ['1']})
        report = json.loads(self.run_command('analyze', '--law', path, '--no-timestamp'))
        self.assertEqual(report['semigroup']['size'], 1)
        self.assertEqual(report['semigroup']['kernel_size'], 1)
        self.assertEqual(report['rees']['G'], ['[1,2,3]'])
        self.assertTrue(report['rees']['H_equals_G'])
        self.assertEqual(report['rees']['p'], 1)

    def test_weights_must_sum_to_one(self):
        thirds = self.write('thirds.json', {'n': 2, 'generators': [[1, 1], [2, 2], [2, 1]],
                                            'weights': ['1/3', '1/3', '1/3']})
        self.run_command('analyze', '--law', thirds, '--no-oracle')
        short = self.write('short.json', {'n': 2, 'generators': [[1, 1], [2, 2]],
                                          'weights': ['1/2', '1/3']})
        with self.assertRaises(CommandError) as cm:
            self.run_command('analyze', '--law', short)
        self.assertEqual(cm.exception.returncode, 3)
        self.assertIn('sum', str(cm.exception))

    def test_parse_errors_name_the_position(self):
        path = self.write('broken.json', '{"n": 2,\n "generators": [[1, 3]], "weights": ["1"]}')
        with self.assertRaises(CommandError) as cm:
            self.run_command('analyze', '--law', path)
        self.assertEqual(cm.exception.returncode, 3)
        self.assertIn('generators[0][1]', str(cm.exception))
        path = self.write('truncated.json', '{"n": 2,\n "generators": [')
        with self.assertRaises(CommandError) as cm:
            self.run_command('analyze', '--law', path)
        self.assertIn('line 2', str(cm.exception))

    def test_text_and_out(self):
        law = self.write('law.json', EXAMPLE)
        out = self.tmp / 'report.txt'
        printed = self.run_command('analyze', '--law', law, '--text', '--out', str(out))
        self.assertEqual(printed, '')
        self.assertIn('eta = nu', out.read_text(encoding='utf-8'))

    def test_save(self):
        path = self.write('law.json', EXAMPLE)
        self.run_command('analyze', '--law', path, '--seed', '7', '--save')
        run = AnalysisRun.objects.get()
        self.assertEqual(run.command, 'analyze')
        self.assertEqual(run.seed, '7')
        self.assertTrue(run.passed)
        self.assertEqual(run.law['weights'], ['1/2', '1/2'])
        self.assertEqual(run.report['rees']['p'], 1)
        self.assertEqual(str(run), f"Run {run.id} - analyze - exit 0")


class SimulationCommandTests(LawFilesMixin, TestCase):

    def test_replications_must_be_positive(self):
        path = self.write('law.json', EXAMPLE)
        with self.assertRaises(CommandError) as cm:
            self.run_command('simulate', '--law', path, '--replications', '0')
        self.assertEqual(cm.exception.returncode, 3)

    def test_example_law(self):
        path = self.write('law.json', EXAMPLE)
        report = json.loads(self.run_command('simulate', '--law', path, '--replications', '2000',
                                             '--seed', '42', '--no-timestamp'))
        self.assertEqual(report['exit_code'], 0)
        self.assertEqual(report['seed'], 42)
        third = report['verification'][-1]
        self.assertEqual(third['name'], 'third noise')
        exact = [c for c in third['checks'] if c['kind'] == 'exact']
        self.assertTrue(exact)
        self.assertTrue(all(c['passed'] for c in exact))

    def test_nonstationary_periodic_law(self):
        law = self.write('cyclic.json', CYCLIC)
        config = self.write('config.json', {
            'mode': 'nonstationary', 'replications': 2000, 'k_min': -5,
            'family': {'c': ['1/2', '1/3', '1/6'],
                       'Lambda_W': [{'(1,2,3)': '1'},
                                    {'(1,2,3)': '1/2', '(1,3,2)': '1/2'},
                                    {'(1,3,2)': '1'}]},
        })
        report = json.loads(self.run_command('simulate', '--law', law, '--config', config,
                                             '--no-timestamp'))
        third = report['verification'][-1]
        self.assertIn('joint_table', third)
        self.assertEqual(len(third['joint_table']), 6)
        self.assertEqual(report['simulation']['mode'], 'nonstationary')
        self.assertEqual(report['simulation']['replications'], 2000)

    def test_verify(self):
        path = self.write('law.json', EXAMPLE)
        report = json.loads(self.run_command('verify', '--law', path, '--replications', '2000',
                                             '--no-timestamp'))
        names = [section['name'] for section in report['verification']]
        self.assertEqual(names, ['structure', 'third noise', 'mono-particle projection', 'mixing'])
        self.assertEqual(report['exit_code'], 0)

    def test_example_command(self):
        text = self.run_command('example', '--replications', '2000', '--text', '--no-timestamp')
        self.assertIn('eta = nu', text)
        self.assertIn('H = G', text)
        self.assertIn('lambda = (1/9, 2/9, 1/9, 2/9, 1/3)', text)
        self.assertIn('exit code 0', text)
        report = json.loads(self.run_command('example', '--replications', '2000', '--no-timestamp'))
        self.assertEqual(report['invariant_law']['lambda'], ['1/9', '2/9', '1/9', '2/9', '1/3'])
        self.assertTrue(report['rees']['H_equals_G'])
        self.assertEqual(report['seed'], 42)
