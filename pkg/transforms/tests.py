from django.test import SimpleTestCase, override_settings
from hypothesis import HealthCheck, assume, given, settings as hsettings, strategies as st

from mapevo.exceptions import ClosureLimitExceeded, StructuralInconsistency, TransformationError
from mapevo.strategies import mapping_laws, transformations
from measures.laws import cyclic_law, example_law
from .rees import ReesData, coset_structure, group_inverses, rees_at
from .semigroup import (generate, idempotents, kernel, kernel_idempotent,
                        minimal_ideal_bruteforce)
from .transformation import (Transformation, apply_tuple, compose, format_tuple,
                             is_distinct, parse_tuple, rank)

T = Transformation.parse

f = T('[2,3,4,1,5]')
g = T('[2,5,5,2,4]')
e = T('[4,2,2,4,5]')
h = T('[2,4,4,2,5]')
fe = T('[1,3,3,1,5]')
ef = T('[2,2,4,4,5]')

FUZZ = hsettings(max_examples=200, deadline=None,
                 suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


def naive_closure(generators):
    found = set(generators)
    while True:
        more = {compose(a, b) for a in found for b in found} - found
        if not more:
            return found
        found |= more


def decompose(law):
    S = generate(law.generators)
    K = kernel(S)
    return S, K, rees_at(K, kernel_idempotent(S, K))


class TransformationTests(SimpleTestCase):

    def test_literals_are_one_based(self):
        self.assertEqual(f.images, (1, 2, 3, 0, 4))
        self.assertEqual(str(f), '[2,3,4,1,5]')
        self.assertEqual(f.one_based(), [2, 3, 4, 1, 5])

    def test_compose_applies_right_factor_first(self):
        self.assertEqual(compose(g, compose(g, g)), e)
        self.assertEqual(compose(e, f), ef)
        self.assertEqual(compose(Transformation.identity(5), f), f)
        self.assertEqual(g * g * g, e)

    def test_h_from_f_and_e(self):
        self.assertEqual(compose(compose(f, f), e), h)
        self.assertEqual(compose(e, compose(f, f)), h)

    def test_compose_size_mismatch(self):
        with self.assertRaises(TransformationError):
            compose(f, Transformation.identity(3))

    def test_rank(self):
        self.assertEqual(rank(e), 3)
        self.assertEqual(rank(Transformation.identity(5)), 5)
        self.assertEqual(rank(T('[1,1,1,1,1]')), 1)

    def test_apply_tuple(self):
        x = parse_tuple('(2,4,5)')
        self.assertEqual(format_tuple(apply_tuple(g, x)), '(5,2,4)')
        self.assertEqual(format_tuple(apply_tuple(h, x)), '(4,2,5)')
        self.assertEqual(apply_tuple(e, x), x)

    def test_distinctness_is_a_predicate(self):
        self.assertTrue(is_distinct(parse_tuple([2, 4, 5])))
        self.assertFalse(is_distinct(parse_tuple([2, 2, 5])))

    def test_rejects_out_of_range_images(self):
        for literal in ('[0,1]', '[1,3]', '[]', '[1,"2"]', 'oops'):
            with self.subTest(literal=literal):
                with self.assertRaises(TransformationError):
                    T(literal)
        with self.assertRaises(TransformationError):
            parse_tuple([1, 6], n=5)

    @given(st.integers(1, 6).flatmap(lambda n: st.tuples(
        transformations(n), transformations(n), transformations(n),
        st.lists(st.integers(0, n - 1), max_size=4).map(tuple))))
    def test_algebraic_laws(self, case):
        a, b, c, x = case
        self.assertEqual(compose(compose(a, b), c), compose(a, compose(b, c)))
        self.assertLessEqual(rank(compose(a, b)), min(rank(a), rank(b)))
        self.assertEqual(apply_tuple(compose(a, b), x), apply_tuple(a, apply_tuple(b, x)))


class SemigroupTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.S = generate([f, g])
        cls.K = kernel(cls.S)

    def test_closure_matches_naive_fixpoint(self):
        self.assertEqual(set(self.S.elements), naive_closure([f, g]))
        self.assertIn(e, self.S)
        self.assertIn(h, self.S)

    def test_canonical_order_starts_with_generators(self):
        self.assertEqual(self.S.generator_maps, [f, g])
        self.assertEqual(self.S.elements[:2], [f, g])

    def test_identity_semigroup(self):
        S = generate([Transformation.identity(4)])
        self.assertEqual(len(S), 1)
        self.assertEqual(kernel(S), S.elements)

    def test_idempotents(self):
        E = idempotents(self.S)
        for z in (e, fe, ef):
            self.assertIn(z, E)
        group = generate([T('[2,3,1]'), T('[2,1,3]')])
        self.assertEqual(idempotents(group), [Transformation.identity(3)])

    def test_kernel_is_minimal_rank(self):
        self.assertEqual(len(self.K), 24)
        self.assertTrue(all(rank(z) == 3 for z in self.K))
        self.assertEqual(set(self.K), set(minimal_ideal_bruteforce(self.S)))

    def test_kernel_of_a_group_is_the_group(self):
        S = generate([T('[2,3,1]'), T('[2,1,3]')])
        self.assertEqual(len(kernel(S)), 6)

    def test_chosen_idempotent(self):
        self.assertEqual(kernel_idempotent(self.S, self.K), e)

    def test_word_for_lists_maps_in_application_order(self):
        self.assertEqual(self.S.word_for(e), [g, g, g])
        for z in self.S.elements[:40]:
            word = self.S.word_for(z)
            product = word[0]
            for step in word[1:]:
                product = compose(step, product)
            self.assertEqual(product, z)

    def test_product_table(self):
        S = generate([T('[2,3,1]')])
        table = S.product_table()
        for i, a in enumerate(S.elements):
            for j, b in enumerate(S.elements):
                self.assertEqual(S.elements[table[i][j]], compose(a, b))

    def test_closure_cap(self):
        with self.assertRaises(ClosureLimitExceeded) as ctx:
            generate([f, g], cap=10)
        self.assertEqual(ctx.exception.exit_code, 3)

    @override_settings(MAPEVO_ELEMENT_CAP=5)
    def test_closure_cap_from_settings(self):
        with self.assertRaises(ClosureLimitExceeded):
            generate([f, g])

    def test_generators_must_share_a_domain(self):
        with self.assertRaises(TransformationError):
            generate([f, Transformation.identity(3)])
        with self.assertRaises(TransformationError):
            generate([])


class ReesTests(SimpleTestCase):

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.S, cls.K, cls.rd = decompose(example_law())

    def test_factors(self):
        rd = self.rd
        gg = compose(g, g)
        self.assertEqual(rd.e, e)
        self.assertEqual(set(rd.L), {e, fe})
        self.assertEqual(set(rd.R), {e, ef})
        self.assertEqual(set(rd.G), {e, g, gg, h, compose(g, h), compose(gg, h)})

    def test_group_relations(self):
        gg = compose(g, g)
        self.assertEqual(compose(g, gg), e)
        self.assertEqual(compose(h, h), e)
        self.assertEqual(compose(h, g), compose(gg, h))
        self.assertEqual(compose(h, gg), compose(g, h))
        self.assertEqual(self.rd.inverse(g), gg)
        self.assertEqual(self.rd.group_unit, e)

    def test_projection_examples(self):
        self.assertEqual(self.rd.project(fe), (fe, e, e))
        self.assertEqual(self.rd.project(e), (e, e, e))
        self.assertEqual(self.rd.project(g), (e, g, e))

    def test_projection_outside_kernel(self):
        with self.assertRaises(TransformationError):
            self.rd.project(f)

    def test_rees_needs_an_idempotent_of_the_kernel(self):
        with self.assertRaises(TransformationError):
            rees_at(self.K, g)
        with self.assertRaises(TransformationError):
            rees_at(self.K, Transformation.identity(5))

    def test_one_element_kernel(self):
        c = T('[3,3,3]')
        rd = rees_at([c], c)
        self.assertEqual((rd.L, rd.G, rd.R), ((c,), (c,), (c,)))

    def test_whole_group_as_single_coset(self):
        rd = self.rd.with_cycle(self.rd.G, e, 1)
        self.assertEqual(coset_structure(rd), [tuple(sorted(self.rd.G))])

    def test_singleton_cosets_of_a_cyclic_group(self):
        S, K, rd = decompose(cyclic_law(3))
        identity = Transformation.identity(3)
        shift = T('[2,3,1]')
        rd = rd.with_cycle([identity], shift, 3)
        self.assertEqual(coset_structure(rd), [(identity,), (shift,), (compose(shift, shift),)])
        self.assertEqual(rd.gamma_power(-1), compose(shift, shift))
        self.assertEqual(rd.split(compose(shift, shift)), (compose(shift, shift), identity))

    def test_coset_structure_rejects_a_non_subgroup(self):
        rd = self.rd.with_cycle([e, g], e, 3)
        with self.assertRaises(StructuralInconsistency):
            coset_structure(rd)
        with self.assertRaises(StructuralInconsistency):
            coset_structure(self.rd)

    def test_group_inverses(self):
        inverses = group_inverses(self.rd.G, e)
        for a in self.rd.G:
            self.assertEqual(compose(a, inverses[a]), e)
        self.assertIsInstance(self.rd, ReesData)


class StructuralFuzzTests(SimpleTestCase):

    @FUZZ
    @given(mapping_laws())
    def test_kernel_and_rees_properties(self, law):
        S = generate(law.generators)
        assume(len(S) <= 3000)
        K = kernel(S)
        members = set(K)
        for s in S.generator_maps:
            for z in K:
                self.assertIn(compose(s, z), members)
                self.assertIn(compose(z, s), members)
        rd = rees_at(K, kernel_idempotent(S, K))
        G = set(rd.G)

        # product then projection, and projection then product
        for l in rd.L:
            for a in rd.G:
                for r in rd.R:
                    z = compose(compose(l, a), r)
                    self.assertEqual(rd.project(z), (l, a, r))
                    # z is idempotent iff r l is the inverse of a
                    self.assertEqual(z.is_idempotent(), compose(r, l) == rd.inverse(a))
        for r in rd.R:
            for l in rd.L:
                self.assertIn(compose(r, l), G)

        # kernel idempotents are primitive
        E = [z for z in K if z.is_idempotent()]
        for a in E:
            for b in E:
                if compose(a, b) == b and compose(b, a) == b:
                    self.assertEqual(a, b)
