from fractions import Fraction

from django.test import SimpleTestCase, override_settings

from cliques.cliques import assemble_family
from mapevo.exceptions import InputError, MeasureError
from measures.laws import cyclic_law, example_law, law_from_literals
from measures.measure import RationalMeasure, uniform
from reports.analysis import analyze_law
from transforms.transformation import Transformation, compose, parse_tuple
from .checks import check_path, driven_factors, estimate_Te, te_tail, verify_factorization
from .paths import make_rng, sample_nonstationary, sample_stationary
from .stats import VerificationReport, exact_check, goodness_of_fit, independence
from .verification import (VerificationConfig, event_table, mono_event_failures, verify_mixing,
                           verify_mono_projection, verify_third_noise)

T = Transformation.parse
F = Fraction

e = T('[4,2,2,4,5]')
fe = T('[1,3,3,1,5]')
w = parse_tuple([2, 4, 5])


class RandomStreamTests(SimpleTestCase):

    def test_seed_range(self):
        for seed in (-1, 2**64, True, 1.5, '42'):
            with self.subTest(seed=seed):
                with self.assertRaises(InputError):
                    make_rng(seed)
        make_rng(2**64 - 1)

    def test_streams_are_reproducible(self):
        a = make_rng(42, 7).integers(1 << 30, size=5)
        b = make_rng(42, 7).integers(1 << 30, size=5)
        c = make_rng(42, 8).integers(1 << 30, size=5)
        self.assertEqual(list(a), list(b))
        self.assertNotEqual(list(a), list(c))


class PathTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.analysis = analyze_law(example_law(), oracle=False)

    def test_same_seed_same_path(self):
        a = sample_stationary(self.analysis, RationalMeasure.point(w), -10, 50, seed=42, replication=3)
        b = sample_stationary(self.analysis, RationalMeasure.point(w), -10, 50, seed=42, replication=3)
        self.assertEqual(a.X, b.X)
        self.assertEqual(a.N, b.N)

    def test_particles_stay_on_the_cliques(self):
        path = sample_stationary(self.analysis, RationalMeasure.point(w), 0, 500, seed=1)
        cliques = {frozenset(parse_tuple([2, 4, 5])), frozenset(parse_tuple([1, 3, 5]))}
        for x in path.X:
            self.assertIn(frozenset(x), cliques)
        self.assertEqual(len(path), 501)

    def test_path_invariants(self):
        path = sample_stationary(self.analysis, RationalMeasure.point(w), 0, 1000, seed=42)
        for check in check_path(path, self.analysis):
            self.assertTrue(check.passed, check.name)
        self.assertEqual(path.Z_W, w)
        for k in (0, 1, 10, 500, 1000):
            self.assertTrue(verify_factorization(path, k, self.analysis).passed)

    def test_single_step_factorization(self):
        path = sample_stationary(self.analysis, RationalMeasure.point(w), 0, 1, seed=5)
        self.assertTrue(verify_factorization(path, 0, self.analysis).passed)

    def test_left_factor_frequency(self):
        hits = 0
        runs = 10**4
        for r in range(runs):
            path = sample_stationary(self.analysis, RationalMeasure.point(w), 0, 1, seed=42, replication=r)
            hits += path.X_L[1] == fe
        self.assertAlmostEqual(hits / runs, 1 / 3, delta=0.02)

    def test_window_and_law_validation(self):
        with self.assertRaises(InputError):
            sample_stationary(self.analysis, RationalMeasure.point(w), 5, 5, seed=1)
        with self.assertRaises(MeasureError):
            sample_stationary(self.analysis, RationalMeasure.point(parse_tuple([5, 2, 4])), 0, 5, seed=1)
        with self.assertRaises(InputError):
            sample_stationary(self.analysis, RationalMeasure.point(w), 0, 5, seed=-3)

    def test_point_mass_law_gives_a_constant_path(self):
        analysis = analyze_law(law_from_literals(['[4,2,2,4,5]'], ['1']), oracle=False)
        target = analysis.cd.W[2]
        path = sample_stationary(analysis, RationalMeasure.point(target), -5, 5, seed=9)
        self.assertEqual(set(path.X), {target})

    def test_coupling_time(self):
        analysis = analyze_law(law_from_literals(['[4,2,2,4,5]'], ['1']), oracle=False)
        path = sample_stationary(analysis, RationalMeasure.point(analysis.cd.W[0]), 0, 20, seed=1)
        word = analysis.word
        self.assertEqual(word, [e])
        self.assertEqual(estimate_Te(path, 20, word), 20 - 1 - len(word))

    def test_coupling_time_on_the_example(self):
        word = self.analysis.word
        lags = []
        for r in range(1000):
            path = sample_stationary(self.analysis, RationalMeasure.point(w), -200, 0, seed=42, replication=r)
            t = estimate_Te(path, 0, word)
            self.assertIsNotNone(t)
            self.assertLess(t, -len(word))
            lags.append(-t)
        tail = te_tail(lags, 100)
        survivals = [s for _, s in tail]
        self.assertEqual(survivals, sorted(survivals, reverse=True))
        self.assertLess(survivals[-1], 0.01)
        with self.assertRaises(InputError):
            estimate_Te(path, 0, [])


class NonStationaryTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.analysis = analyze_law(cyclic_law(3), oracle=False)

    def test_phase_is_fixed_by_the_family(self):
        cd = self.analysis.cd
        family = assemble_family(cd, [1, 0, 0], [uniform(cd.W)] * 3)
        identity = Transformation.identity(3)
        for r in range(20):
            path = sample_nonstationary(self.analysis, family, -10, 10, seed=42, replication=r)
            self.assertEqual(path.Y_C, identity)
            for i, k in enumerate(path.times()):
                self.assertEqual(path.X_C[i], self.analysis.rd.gamma_power(k))
            for check in check_path(path, self.analysis):
                self.assertTrue(check.passed, check.name)

    def test_single_coset_family_reduces_to_the_stationary_start(self):
        analysis = analyze_law(example_law(), oracle=False)
        family = assemble_family(analysis.cd, [1], [RationalMeasure.point(w)])
        path = sample_nonstationary(analysis, family, -3, 3, seed=11)
        self.assertEqual(path.Z_W, w)
        self.assertIn(path.X[0], analysis.cd)

    def test_family_size_must_match_p(self):
        family = assemble_family(self.analysis.cd, [1], [uniform(self.analysis.cd.W)])
        with self.assertRaises(InputError):
            sample_nonstationary(self.analysis, family, 0, 5, seed=1)

    def test_joint_phase_and_representative(self):
        cd = self.analysis.cd
        family = assemble_family(cd, [F(1, 2), F(1, 3), F(1, 6)],
                                 [RationalMeasure.point(cd.W[0]), uniform(cd.W),
                                  RationalMeasure({cd.W[0]: F(1, 4), cd.W[1]: F(3, 4)})])
        config = VerificationConfig(mode='nonstationary', family=family, replications=2000,
                                    k_min=-5, k_max=0, path_steps=60)
        report = verify_third_noise(self.analysis, config)
        self.assertEqual(report.exit_code, 0, report.to_json())
        names = {c.name for c in report.checks}
        self.assertIn('(Y_C, Z_W) ~ c_i Lambda^i_W', names)
        self.assertIn('joint_table', report.extras)
        vacuous = [c for c in report.checks if c.name == 'U_H_0 uniform on H']
        self.assertTrue(vacuous[0].passed)
        self.assertTrue(vacuous[0].note.startswith('vacuous'))


class StatisticsTests(SimpleTestCase):

    def test_goodness_of_fit(self):
        samples = ['a'] * 500 + ['b'] * 500
        self.assertTrue(goodness_of_fit('fair', samples, {'a': 1, 'b': 1}, 0.001).passed)
        self.assertFalse(goodness_of_fit('skewed', samples, {'a': 9, 'b': 1}, 0.001).passed)
        self.assertFalse(goodness_of_fit('stray', samples + ['c'], {'a': 1, 'b': 1}, 0.001).passed)

    def test_independence(self):
        left = [0, 1] * 500
        self.assertFalse(independence('copy', left, left, 0.001).passed)
        check = independence('flat', left, [0] * 1000, 0.001)
        self.assertTrue(check.passed)
        self.assertTrue(check.note.startswith('vacuous'))

    def test_report_exit_codes(self):
        report = VerificationReport('r')
        report.add(exact_check('fine', 0, 10))
        self.assertEqual(report.exit_code, 0)
        report.add(goodness_of_fit('skewed', ['a'] * 100, {'a': 1, 'b': 1}, 0.001))
        self.assertEqual(report.exit_code, 1)
        report.add(exact_check('broken', 1, 10))
        self.assertEqual(report.exit_code, 2)


class VerificationTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.analysis = analyze_law(example_law(), oracle=False)

    def test_config_validation(self):
        with self.assertRaises(InputError):
            VerificationConfig(replications=0)
        with self.assertRaises(InputError):
            VerificationConfig(k_min=0, k_max=0)
        with self.assertRaises(InputError):
            VerificationConfig(k_min=-2, k_max=0, window=3)
        with self.assertRaises(InputError):
            VerificationConfig(mode='nonstationary')
        with self.assertRaises(InputError):
            VerificationConfig(alpha=2.0)
        config = VerificationConfig()
        self.assertEqual((config.replications, config.seed, config.window), (10**4, 42, 3))

    @override_settings(MAPEVO_REPLICATIONS=500)
    def test_third_noise_needs_enough_replications(self):
        with self.assertRaises(InputError):
            verify_third_noise(self.analysis, VerificationConfig())

    def test_third_noise_on_the_example(self):
        report = verify_third_noise(self.analysis, VerificationConfig(seed=42))
        self.assertEqual(report.exit_code, 0, report.to_json())
        by_name = {c.name: c for c in report.checks}
        uniform_check = by_name['U_H_0 uniform on H']
        self.assertEqual(uniform_check.dof, 5)
        self.assertEqual(uniform_check.replications, 10**4)
        window_check = by_name['U_H_0 independent of N-window (width 3)']
        self.assertEqual(window_check.dof, 5 * 7)
        self.assertEqual(report.extras['Te']['word'], ['[2,5,5,2,4]'] * 3)

    def test_event_table_of_the_example(self):
        table = event_table(self.analysis, RationalMeasure.point(w))
        one, two, three, four, five = range(5)
        self.assertEqual(table[one], [(fe, four)])
        self.assertEqual(table[two], [(e, two)])
        self.assertEqual(table[three], [(fe, two)])
        self.assertEqual(table[four], [(e, four)])
        self.assertEqual({u for _, u in table[five]}, {five})

    def test_mono_projection(self):
        report = verify_mono_projection(self.analysis, VerificationConfig(replications=2000))
        self.assertEqual(report.exit_code, 0, report.to_json())
        self.assertTrue(report.extras['measurable'])
        self.assertEqual(report.extras['lambda'], ['1/9', '2/9', '1/9', '2/9', '1/3'])

    def test_driven_factors_follow_the_path(self):
        path = sample_stationary(self.analysis, RationalMeasure.point(w), -20, 20, seed=3)
        for k in (-20, -19, 0, 20):
            i = path.index(k)
            self.assertEqual(driven_factors(path, k, self.analysis), (path.X_L[i], path.X_G[i]))

    def test_event_check_sees_a_wrong_first_particle(self):
        table = event_table(self.analysis, RationalMeasure.point(w))
        paths = [sample_stationary(self.analysis, RationalMeasure.point(w), -5, 5, seed=4, replication=r)
                 for r in range(3)]
        self.assertEqual(mono_event_failures(self.analysis, paths, 5, table), 0)
        i = paths[0].index(5)
        x = paths[0].X[i]
        paths[0].X[i] = (x[1], x[0]) + x[2:]
        self.assertEqual(mono_event_failures(self.analysis, paths, 5, table), 1)

    def test_mixing(self):
        report = verify_mixing(self.analysis, VerificationConfig(replications=2000))
        gating = [c for c in report.checks if c.gating]
        self.assertEqual(len(gating), 1)
        self.assertEqual(len(report.checks), 3)
        self.assertTrue(gating[0].passed, gating[0].to_json())
        self.assertEqual(report.exit_code, 0)

    def test_factor_product(self):
        # the stationary start is built from an L-part, a G-part and w
        path = sample_stationary(self.analysis, RationalMeasure.point(w), 0, 3, seed=2)
        l, a, _ = self.analysis.cd.triple_of[path.X[0]]
        self.assertEqual(path.X[0], tuple(compose(l, a)(x) for x in w))
