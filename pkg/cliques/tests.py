from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import HealthCheck, assume, given, settings as hsettings, strategies as st

from mapevo.exceptions import ClassificationError, InputError, MeasureError
from mapevo.strategies import mapping_laws, rational_weights
from measures.laws import cyclic_law, example_law, law_from_literals
from measures.limits import analyze_limits
from measures.measure import RationalMeasure, act_on_tuples, measure_products, uniform
from transforms.rees import rees_at
from transforms.semigroup import generate, kernel, kernel_idempotent
from transforms.transformation import Transformation, apply_tuple, compose, parse_tuple
from .cliques import (MERGED, assemble_family, classify_family, compute_W, deadlock_pairs,
                      deadlocked_sets, f_cliques, family_law, invariant_laws, is_deadlock,
                      is_deadlocked_set, mono_marginal, pair_graph, project_tuple,
                      stationary_family)

T = Transformation.parse
F = Fraction

f = T('[2,3,4,1,5]')
g = T('[2,5,5,2,4]')
e = T('[4,2,2,4,5]')
h = T('[2,4,4,2,5]')
fe = T('[1,3,3,1,5]')
w = parse_tuple([2, 4, 5])

FUZZ = hsettings(max_examples=200, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


def analyze(law):
    S = generate(law.generators)
    K = kernel(S)
    rd, limits = analyze_limits(law, rees_at(K, kernel_idempotent(S, K)))
    return S, K, rd, limits, compute_W(S, K, rd)


class DeadlockTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.S = generate([f, g])
        cls.K = kernel(cls.S)

    def test_pairs(self):
        self.assertTrue(is_deadlock(self.S, 1, 3))
        # ef = [2,2,4,4,5] merges 1 and 2
        self.assertFalse(is_deadlock(self.S, 0, 1))

    def test_identity_merges_nothing(self):
        S = generate([Transformation.identity(4)])
        self.assertEqual(len(deadlock_pairs(S)), 6)

    def test_same_point(self):
        with self.assertRaises(InputError):
            is_deadlock(self.S, 2, 2)

    def test_deadlocks_agree_with_the_definition(self):
        pairs = deadlock_pairs(self.S)
        for x in range(5):
            for y in range(x + 1, 5):
                merged = any(z(x) == z(y) for z in self.S.elements)
                self.assertEqual((x, y) in pairs, not merged)

    def test_pair_graph(self):
        P = pair_graph(self.S)
        self.assertEqual(P.number_of_nodes(), 11)
        # g = [2,5,5,2,4] collapses 2 and 3, f = [2,3,4,1,5] sends {1,3} to {2,4}
        self.assertIn(MERGED, P[(1, 2)])
        self.assertIn((1, 3), P[(0, 2)])
        self.assertEqual(P.out_degree(MERGED), 0)

    def test_deadlocks_of_a_six_point_law(self):
        mu = law_from_literals(['[2,1,4,3,6,5]', '[1,1,3,3,5,6]', '[3,4,5,6,1,2]'],
                               ['1/3', '1/3', '1/3'])
        S = generate(mu.generators)
        pairs = deadlock_pairs(S)
        for x in range(6):
            for y in range(x + 1, 6):
                merged = any(z(x) == z(y) for z in S.elements)
                self.assertEqual((x, y) in pairs, not merged)

    def test_deadlocked_sets_beyond_the_f_cliques(self):
        mu = law_from_literals(['[1,2,1,2]'], ['1'])
        S, K, rd, limits, cd = analyze(mu)
        pairs = deadlock_pairs(S)
        self.assertEqual(pairs, {(0, 1), (0, 3), (1, 2), (2, 3)})
        self.assertEqual(cd.f_cliques, ((0, 1),))
        self.assertEqual(cd.W_mu, ((0, 1), (1, 0)))
        self.assertEqual(deadlocked_sets(4, cd.m_mu, pairs), [(0, 1), (0, 3), (1, 2), (2, 3)])
        self.assertTrue(is_deadlock(S, 2, 3, pairs))
        self.assertNotIn((2, 3), cd)

    def test_deadlocked_sets_of_the_example(self):
        pairs = deadlock_pairs(self.S)
        self.assertEqual(deadlocked_sets(5, 3, pairs), f_cliques(self.K))
        self.assertEqual(len(deadlocked_sets(5, 1, pairs)), 5)

    def test_f_cliques(self):
        self.assertEqual(f_cliques(self.K), [(0, 2, 4), (1, 3, 4)])
        group = generate([T('[2,3,1]'), T('[2,1,3]')])
        self.assertEqual(f_cliques(kernel(group)), [(0, 1, 2)])


class CliqueDataTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.mu = example_law()
        cls.S, cls.K, cls.rd, cls.limits, cls.cd = analyze(cls.mu)

    def test_sizes(self):
        cd = self.cd
        self.assertEqual(cd.m_mu, 3)
        self.assertEqual(len(cd.W_mu), 12)
        self.assertEqual(len(cd.eW_mu), 6)
        self.assertEqual(cd.W, (w,))
        self.assertEqual(set(cd.eW_mu), {apply_tuple(a, w) for a in self.rd.G})

    def test_projections(self):
        gh = compose(g, h)
        self.assertEqual(project_tuple(self.cd, parse_tuple([3, 5, 1])), (fe, gh, w))
        self.assertEqual(project_tuple(self.cd, w), (e, e, w))
        self.assertEqual(project_tuple(self.cd, parse_tuple([5, 2, 4])), (e, g, w))

    def test_projection_outside_W_mu(self):
        with self.assertRaises(InputError):
            project_tuple(self.cd, parse_tuple([1, 2, 3]))

    def test_W_mu_is_stable(self):
        for a in self.S.elements:
            for x in self.cd.W_mu:
                self.assertIn(apply_tuple(a, x), self.cd)

    def test_transitive_group_keeps_every_ordering(self):
        mu = law_from_literals(['[2,3,1]', '[2,1,3]'], ['1/2', '1/2'])
        S, K, rd, limits, cd = analyze(mu)
        self.assertEqual(len(cd.W_mu), 6)
        self.assertEqual(len(cd.W), 1)

    def test_unique_invariant_law(self):
        lam = invariant_laws(self.mu, self.rd, self.limits, self.cd, RationalMeasure.point(w))
        self.assertEqual(lam, measure_products([self.limits.eta_L, uniform(self.rd.G), w]))
        self.assertEqual(len(lam), 12)
        marginal = mono_marginal(lam)
        self.assertEqual([marginal[(x,)] for x in range(5)],
                         [F(1, 9), F(2, 9), F(1, 9), F(2, 9), F(3, 9)])
        self.assertEqual(act_on_tuples(self.mu, marginal), marginal)

    def test_invariant_law_needs_a_law_on_W(self):
        with self.assertRaises(MeasureError):
            invariant_laws(self.mu, self.rd, self.limits, self.cd,
                           RationalMeasure.point(parse_tuple([5, 2, 4])))

    def test_mixtures_of_invariant_laws_are_invariant(self):
        mu = law_from_literals(['[2,3,1]', '[2,1,3]'], ['1/2', '1/2'])
        S, K, rd, limits, cd = analyze(mu)
        lam = invariant_laws(mu, rd, limits, cd, uniform(cd.W))
        self.assertEqual(act_on_tuples(mu, lam), lam)


class FamilyTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.mu = example_law()
        cls.example = analyze(cls.mu)
        cls.cyclic = analyze(cyclic_law(3))

    def test_example_has_a_single_family(self):
        S, K, rd, limits, cd = self.example
        lam = invariant_laws(self.mu, rd, limits, cd, RationalMeasure.point(w))
        family = classify_family(self.mu, rd, limits, cd, lam)
        self.assertEqual(family.coefficients, (1,))
        self.assertEqual(family.conditional_laws, (RationalMeasure.point(w),))

    def test_cyclic_single_term(self):
        S, K, rd, limits, cd = self.cyclic
        self.assertEqual(rd.p, 3)
        self.assertEqual(len(cd.W), 2)
        target = cd.W[1]
        lam0 = measure_products([limits.eta_L, rd.gamma, uniform(rd.H), target])
        family = classify_family(cyclic_law(3), rd, limits, cd, lam0)
        self.assertEqual(family.coefficients, (0, 1, 0))
        self.assertEqual(family.conditional_laws[1], RationalMeasure.point(target))
        self.assertEqual(family.conditional_laws[0], uniform(cd.W))

    def test_family_follows_mu(self):
        S, K, rd, limits, cd = self.cyclic
        mu = cyclic_law(3)
        family = assemble_family(cd, [F(1, 2), F(1, 3), F(1, 6)],
                                 [RationalMeasure.point(cd.W[0]), uniform(cd.W), RationalMeasure.point(cd.W[1])])
        for k in range(-4, 4):
            self.assertEqual(family_law(rd, limits, family, k + 1),
                             act_on_tuples(mu, family_law(rd, limits, family, k)))
        self.assertEqual(family_law(rd, limits, family, 3), family_law(rd, limits, family, 0))

    def test_stationary_family_is_constant(self):
        S, K, rd, limits, cd = self.cyclic
        lam = invariant_laws(cyclic_law(3), rd, limits, cd, RationalMeasure.point(cd.W[0]))
        family = stationary_family(rd, RationalMeasure.point(cd.W[0]))
        for k in range(3):
            self.assertEqual(family_law(rd, limits, family, k), lam)

    def test_not_a_family(self):
        S, K, rd, limits, cd = self.example
        with self.assertRaises(ClassificationError) as ctx:
            classify_family(self.mu, rd, limits, cd, RationalMeasure.point(w))
        self.assertIn('(2,4,5)', ctx.exception.residual)
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_outside_W_mu_is_rejected(self):
        S, K, rd, limits, cd = self.example
        with self.assertRaises(ClassificationError):
            classify_family(self.mu, rd, limits, cd, RationalMeasure.point(parse_tuple([1, 2, 3])))
        with self.assertRaises(MeasureError):
            classify_family(self.mu, rd, limits, cd, RationalMeasure.point(parse_tuple([2, 2, 5])))

    def test_assemble_validates(self):
        S, K, rd, limits, cd = self.cyclic
        with self.assertRaises(InputError):
            assemble_family(cd, [F(1, 2), F(1, 2)], [uniform(cd.W)])
        with self.assertRaises(InputError):
            assemble_family(cd, [F(1, 2), F(1, 3), F(1, 3)], [uniform(cd.W)] * 3)
        with self.assertRaises(MeasureError):
            assemble_family(cd, [1, 0, 0], [RationalMeasure.point(cd.eW_mu[2])] * 3)


class CliqueFuzzTests(SimpleTestCase):

    @FUZZ
    @given(mapping_laws(), st.data())
    def test_cliques_and_families(self, mu, data):
        S = generate(mu.generators)
        assume(len(S) <= 2000)
        K = kernel(S)
        rd = rees_at(K, kernel_idempotent(S, K))
        assume(len(rd.L) * len(rd.G) <= 120 and len(rd.G) * len(rd.R) <= 120)
        rd, limits = analyze_limits(mu, rd)
        cd = compute_W(S, K, rd)
        pairs = deadlock_pairs(S)
        n = S.n

        # F-cliques are maximal deadlocked sets and are the kernel images
        for clique in cd.f_cliques:
            for extra in set(range(n)) - set(clique):
                self.assertFalse(is_deadlocked_set(clique + (extra,), pairs))
        by_definition = {z for z in S.elements
                         if is_deadlocked_set(sorted(z.image()), pairs)
                         and all(not is_deadlocked_set(sorted(z.image()) + [x], pairs)
                                 for x in set(range(n)) - z.image())}
        self.assertEqual(by_definition, set(K))

        for a in S.generator_maps:
            for x in cd.W_mu:
                self.assertIn(apply_tuple(a, x), cd)

        weights = data.draw(rational_weights(len(cd.W)))
        Lambda_W = RationalMeasure(dict(zip(cd.W, weights)))
        lam = invariant_laws(mu, rd, limits, cd, Lambda_W)
        self.assertEqual(act_on_tuples(mu, lam), lam)

        c = data.draw(rational_weights(rd.p, allow_zero=True))
        laws = [RationalMeasure(dict(zip(cd.W, data.draw(rational_weights(len(cd.W))))))
                if ci else uniform(cd.W) for ci in c]
        family = assemble_family(cd, c, laws)
        classified = classify_family(mu, rd, limits, cd, family_law(rd, limits, family, 0))
        self.assertEqual(classified, family)
