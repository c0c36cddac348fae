import json
from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import HealthCheck, assume, given, settings as hsettings

from mapevo.exceptions import InputError, MeasureError, StructuralInconsistency
from mapevo.strategies import mapping_laws
from transforms.rees import coset_structure, rees_at
from transforms.semigroup import generate, kernel, kernel_idempotent
from transforms.transformation import Transformation, compose, parse_tuple
from .laws import cyclic_law, example_law, law_from_literals, loads_law, parse_law
from .limits import (analyze_limits, assemble_limits, cesaro_average, float_limit_oracle,
                     left_factor, left_stationary, period_and_H, right_factor,
                     right_stationary, sup_distance)
from .linalg import stationary_law
from .measure import (RationalMeasure, act_on_tuples, convolve, format_rational,
                      marginal_transition_matrix, measure_products, mixture, uniform)

T = Transformation.parse
F = Fraction

f = T('[2,3,4,1,5]')
g = T('[2,5,5,2,4]')
e = T('[4,2,2,4,5]')
h = T('[2,4,4,2,5]')
fe = T('[1,3,3,1,5]')
ef = T('[2,2,4,4,5]')
w = parse_tuple([2, 4, 5])

eta_L = RationalMeasure({e: F(2, 3), fe: F(1, 3)})
eta_R = RationalMeasure({e: F(2, 3), ef: F(1, 3)})

FUZZ = hsettings(max_examples=200, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


def decompose(law):
    S = generate(law.generators)
    K = kernel(S)
    return S, K, rees_at(K, kernel_idempotent(S, K))


class MeasureTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.mu = example_law()
        cls.S, cls.K, cls.rd = decompose(cls.mu)

    def test_convolution_with_left_factor(self):
        expected = RationalMeasure({fe: F(1, 3), g: F(1, 2), h: F(1, 6)})
        self.assertEqual(convolve(self.mu, eta_L), expected)

    def test_point_masses_and_haar(self):
        delta = RationalMeasure.point(e)
        self.assertEqual(convolve(delta, delta), delta)
        omega = uniform(self.rd.G)
        self.assertEqual(convolve(omega, omega), omega)
        self.assertTrue(all(wt == F(1, 6) for _, wt in omega.items()))
        self.assertEqual(uniform([e]), delta)

    def test_support_of_a_convolution_is_the_product_set(self):
        a = convolve(self.mu, self.mu)
        expected = {compose(x, y) for x in self.mu.support() for y in self.mu.support()}
        self.assertEqual(set(a.support()), expected)
        self.assertEqual(a.total(), 1)

    def test_uniform_on_empty_set(self):
        with self.assertRaises(MeasureError):
            uniform([])

    def test_convolution_carrier_mismatch(self):
        with self.assertRaises(MeasureError):
            convolve(self.mu, RationalMeasure.point(Transformation.identity(3)))
        with self.assertRaises(MeasureError):
            convolve(self.mu, RationalMeasure.point(w))

    def test_invalid_weights(self):
        with self.assertRaises(MeasureError):
            RationalMeasure({e: F(1, 2)})
        with self.assertRaises(MeasureError):
            RationalMeasure({e: F(3, 2), fe: F(-1, 2)})
        with self.assertRaises(MeasureError):
            RationalMeasure({e: F(1, 2), w: F(1, 2)})

    def test_invariant_tuple_law(self):
        lam = measure_products([eta_L, uniform(self.rd.G), w])
        self.assertEqual(act_on_tuples(self.mu, lam), lam)
        identity = RationalMeasure.point(Transformation.identity(5))
        self.assertEqual(act_on_tuples(identity, lam), lam)

    def test_invariant_one_point_law(self):
        lam = RationalMeasure({(0,): F(1, 9), (1,): F(2, 9), (2,): F(1, 9),
                               (3,): F(2, 9), (4,): F(3, 9)})
        self.assertEqual(act_on_tuples(self.mu, lam), lam)

    def test_tuple_dimension_mismatch(self):
        with self.assertRaises(MeasureError):
            act_on_tuples(self.mu, RationalMeasure.point((7,)))

    def test_transition_matrix(self):
        P = marginal_transition_matrix(self.mu)
        self.assertEqual(P[0], [0, 1, 0, 0, 0])
        self.assertEqual(P[3], [F(1, 2), F(1, 2), 0, 0, 0])
        for row in P:
            self.assertEqual(sum(row), 1)
        I = marginal_transition_matrix(RationalMeasure.point(Transformation.identity(3)))
        self.assertEqual(I, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def test_products(self):
        nu = measure_products([eta_L, uniform(self.rd.G), eta_R])
        self.assertEqual(len(nu), 24)
        self.assertEqual(measure_products([e]), RationalMeasure.point(e))
        with self.assertRaises(MeasureError):
            measure_products([])

    def test_mixture(self):
        m = mixture([(F(1, 4), RationalMeasure.point(e)), (F(3, 4), RationalMeasure.point(fe))])
        self.assertEqual(m[fe], F(3, 4))
        self.assertEqual(m[g], 0)

    def test_rationals_print_in_lowest_terms(self):
        self.assertEqual(format_rational(F(3, 9)), '1/3')
        self.assertEqual(format_rational(1), '1/1')
        self.assertEqual(eta_L.as_strings(), {'[4,2,2,4,5]': '2/3', '[1,3,3,1,5]': '1/3'})


class LawFileTests(SimpleTestCase):

    def test_round_trip_of_the_example(self):
        law = example_law()
        self.assertEqual(parse_law(law.to_json()), law)
        self.assertEqual(law.to_json(), {
            'n': 5, 'generators': [[2, 3, 4, 1, 5], [2, 5, 5, 2, 4]], 'weights': ['1/2', '1/2']})

    def test_three_thirds_accepted(self):
        law = parse_law({'n': 2, 'generators': [[1, 1], [2, 2], [2, 1]],
                         'weights': ['1/3', '1/3', '1/3']})
        self.assertEqual(len(law), 3)

    def test_sum_must_be_one(self):
        with self.assertRaisesMessage(InputError, 'sum is 5/6'):
            parse_law({'n': 2, 'generators': [[1, 1], [2, 2]], 'weights': ['1/2', '1/3']})

    def test_field_paths_in_errors(self):
        cases = [
            ({'n': 2, 'generators': [[1, 1], [2, 3]], 'weights': ['1/2', '1/2']}, 'generators[1][1]'),
            ({'n': 2, 'generators': [[1, 1]], 'weights': [0.5]}, 'weights[0]'),
            ({'n': 2, 'generators': [[1, 1]], 'weights': ['0/1']}, 'weights[0]'),
            ({'n': 0, 'generators': [[1]], 'weights': ['1']}, 'n:'),
            ({'generators': [], 'weights': []}, "'n'"),
        ]
        for data, fragment in cases:
            with self.subTest(fragment=fragment):
                with self.assertRaisesMessage(InputError, fragment):
                    parse_law(data)

    def test_json_errors_carry_line_and_column(self):
        with self.assertRaisesMessage(InputError, 'line 2 column'):
            loads_law('{"n": 2,\n "generators": [[1,1]] "weights": ["1"]}')

    def test_duplicate_generators_merge(self):
        law = loads_law(json.dumps({'n': 2, 'generators': [[1, 2], [1, 2]], 'weights': ['1/4', '3/4']}))
        self.assertEqual(law[Transformation.identity(2)], 1)

    def test_literals(self):
        law = law_from_literals(['[4,2,2,4,5]'], ['1'])
        self.assertEqual(law.generators, [e])


class LinearAlgebraTests(SimpleTestCase):

    def test_three_state_chain(self):
        steps = {'a': [('b', F(2, 3)), ('c', F(1, 3))],
                 'b': [('a', F(1, 2)), ('c', F(1, 2))],
                 'c': [('a', F(1))]}
        pi = stationary_law(['a', 'b', 'c'], steps.__getitem__)
        self.assertEqual(pi, {'a': F(3, 7), 'b': F(2, 7), 'c': F(2, 7)})
        self.assertTrue(all(type(q) is Fraction for q in pi.values()))

    def test_chain_leaving_its_states(self):
        with self.assertRaises(StructuralInconsistency):
            stationary_law(['a'], lambda s: [('b', F(1))])

    def test_two_state_chain(self):
        steps = {'a': [('b', F(1))], 'b': [('a', F(1, 2)), ('b', F(1, 2))]}
        self.assertEqual(stationary_law(['a', 'b'], steps.__getitem__), {'a': F(1, 3), 'b': F(2, 3)})

    def test_reducible_chain_is_rejected(self):
        steps = {'a': [('a', F(1))], 'b': [('b', F(1))]}
        with self.assertRaises(StructuralInconsistency):
            stationary_law(['a', 'b'], steps.__getitem__)


class LimitTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.mu = example_law()
        cls.S, cls.K, rd = decompose(cls.mu)
        cls.rd, cls.limits = analyze_limits(cls.mu, rd)

    def test_factors(self):
        self.assertEqual(self.limits.eta_L, eta_L)
        self.assertEqual(self.limits.eta_R, eta_R)

    def test_left_fixed_point_on_twelve_states(self):
        beta = left_stationary(self.mu, self.rd)
        self.assertEqual(len(beta), 12)
        for z, weight in beta.items():
            l, _, _ = self.rd.project(z)
            self.assertEqual(weight, eta_L[l] / 6)
        self.assertEqual(left_factor(self.rd, beta), eta_L)
        self.assertEqual(right_factor(self.rd, right_stationary(self.mu, self.rd)), eta_R)

    def test_period_and_H(self):
        self.assertEqual(self.limits.p, 1)
        self.assertEqual(set(self.rd.H), set(self.rd.G))
        self.assertEqual(self.rd.gamma, e)

    def test_eta_equals_nu(self):
        limits = self.limits
        self.assertTrue(limits.eta_equals_nu)
        self.assertEqual(limits.nu, measure_products([eta_L, uniform(self.rd.G), eta_R]))
        for z in self.K:
            zl, _, zr = self.rd.project(z)
            self.assertEqual(limits.nu[z], eta_L[zl] * F(1, 6) * eta_R[zr])

    def test_point_mass_at_an_idempotent(self):
        mu = law_from_literals(['[4,2,2,4,5]'], ['1'])
        S, K, rd = decompose(mu)
        rd, limits = analyze_limits(mu, rd)
        self.assertEqual(left_stationary(mu, rd), RationalMeasure.point(e))
        self.assertEqual(limits.eta_R, RationalMeasure.point(e))
        self.assertEqual((limits.p, limits.eta, limits.nu),
                         (1, RationalMeasure.point(e), RationalMeasure.point(e)))

    def test_order_three_cycle(self):
        mu = cyclic_law(3)
        S, K, rd = decompose(mu)
        p, H, gamma = period_and_H(mu, rd)
        self.assertEqual((p, H, gamma), (3, [Transformation.identity(3)], T('[2,3,1]')))
        rd, limits = analyze_limits(mu, rd)
        self.assertEqual(limits.eta, RationalMeasure.point(Transformation.identity(3)))
        self.assertEqual(limits.cycle[1], mu)
        self.assertEqual(limits.nu, uniform(S.elements))
        self.assertFalse(limits.eta_equals_nu)

    def test_assemble_rejects_wrong_factors(self):
        with self.assertRaises(StructuralInconsistency):
            assemble_limits(self.mu, self.rd, RationalMeasure.point(e), eta_R)

    def test_oracle_on_the_example(self):
        oracle = float_limit_oracle(self.mu, self.S, max_lag=len(self.rd.G))
        self.assertTrue(oracle.converged)
        self.assertEqual(oracle.p_est, 1)
        self.assertLess(oracle.distance_to(self.limits.eta), 1e-9)

    def test_oracle_on_a_point_mass(self):
        mu = law_from_literals(['[4,2,2,4,5]'], ['1'])
        oracle = float_limit_oracle(mu, generate(mu.generators), max_lag=1)
        self.assertEqual((oracle.converged, oracle.p_est, oracle.iterations), (True, 1, 1))

    def test_oracle_on_the_cycle(self):
        mu = cyclic_law(3)
        S, K, rd = decompose(mu)
        rd, limits = analyze_limits(mu, rd)
        oracle = float_limit_oracle(mu, S, max_lag=len(rd.G))
        self.assertEqual(oracle.p_est, 3)
        self.assertLess(oracle.distance_to(limits.eta), 1e-9)
        self.assertLess(oracle.distance_to(limits.nu, estimate='nu'), 1e-9)

    def test_oracle_gives_up(self):
        oracle = float_limit_oracle(cyclic_law(3), generate(cyclic_law(3).generators),
                                    max_lag=1, max_iter=50)
        self.assertFalse(oracle.converged)

    def test_cesaro_average(self):
        near = sup_distance(cesaro_average(self.mu, self.S, 10**4), self.limits.nu)
        far = sup_distance(cesaro_average(self.mu, self.S, 10**3), self.limits.nu)
        self.assertLess(near, 1e-3)
        self.assertLess(5 * near, far)


class LimitFuzzTests(SimpleTestCase):

    @FUZZ
    @given(mapping_laws())
    def test_limit_invariants_and_oracle(self, mu):
        S = generate(mu.generators)
        assume(len(S) <= 3000)
        K = kernel(S)
        rd = rees_at(K, kernel_idempotent(S, K))
        assume(len(rd.L) * len(rd.G) <= 120 and len(rd.G) * len(rd.R) <= 120)
        # analyze_limits raises on any failed identity
        rd, limits = analyze_limits(mu, rd)
        cosets = coset_structure(rd)
        self.assertEqual(len(cosets), limits.p)
        self.assertEqual(len(rd.G), limits.p * len(rd.H))
        beta_right = right_stationary(mu, rd)
        self.assertEqual(convolve(beta_right, mu), beta_right)

        oracle = float_limit_oracle(mu, S, max_lag=len(rd.G), max_iter=200000)
        self.assertTrue(oracle.converged, f"oracle stopped after {oracle.iterations} steps")
        self.assertEqual(oracle.p_est, limits.p)
        self.assertLess(oracle.distance_to(limits.eta), 1e-9)
