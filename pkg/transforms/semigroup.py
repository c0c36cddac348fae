# transforms/semigroup.py
"""The semigroup S generated by a set of transformations.

Elements are kept in a canonical order: breadth first by word length, ties
broken lexicographically on image tables. That order is what makes every
"pick one" decision downstream reproducible.
"""
import logging
from itertools import product as cartesian

from django.conf import settings

from mapevo.exceptions import ClosureLimitExceeded, StructuralInconsistency, TransformationError
from .transformation import compose, rank

logger = logging.getLogger(__name__)


class Semigroup:
    """Closure of the generators under composition.

    `elements[i]` is the i-th element in canonical order, `index` maps an
    element back to its position, `generators` holds the positions of the
    generating maps and `left[a][i]` is the position of generator a composed
    with element i (gen_a o s_i). Products of arbitrary pairs are computed on
    demand through `product`; `product_table` materialises all of them.
    """

    def __init__(self, elements, generators, left, parents):
        self.elements = elements
        self.index = {z: i for i, z in enumerate(elements)}
        self.generators = generators
        self.left = left
        self._parents = parents

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, z):
        return z in self.index

    @property
    def n(self):
        return self.elements[0].n

    @property
    def generator_maps(self):
        return [self.elements[i] for i in self.generators]

    def product(self, i, j):
        """Position of elements[i] o elements[j]."""
        return self.index[compose(self.elements[i], self.elements[j])]

    def product_table(self):
        size = len(self.elements)
        return [[self.product(i, j) for j in range(size)] for i in range(size)]

    def word_for(self, z):
        """Shortest generator word (f_1, ..., f_n) with f_n o ... o f_1 = z.

        The word is listed in order of application: f_1 acts first.
        """
        i = self.index[z]
        word = []
        while i is not None:
            gen, parent = self._parents[i]
            word.append(self.elements[gen])
            i = parent
        word.reverse()
        return word


def generate(generators, cap=None):
    """BFS closure of the generators; level k holds the elements of word length k."""
    generators = list(generators)
    if not generators:
        raise TransformationError("a semigroup needs at least one generator")
    n = generators[0].n
    for f in generators:
        if f.n != n:
            raise TransformationError(f"generators act on {n} and {f.n} points")
    if cap is None:
        cap = settings.MAPEVO_ELEMENT_CAP

    gens = sorted(set(generators))
    elements = list(gens)
    index = {z: i for i, z in enumerate(elements)}
    # parents[i] = (position of the last generator applied, position of the rest)
    parents = [(i, None) for i in range(len(gens))]
    if len(elements) > cap:
        raise ClosureLimitExceeded(cap, len(elements))

    level = list(range(len(gens)))
    while level:
        found = {}
        for s in level:
            for a, f in enumerate(gens):
                z = compose(f, elements[s])
                if z not in index and z not in found:
                    found[z] = (a, s)
        level = []
        for z in sorted(found):
            index[z] = len(elements)
            level.append(len(elements))
            elements.append(z)
            parents.append(found[z])
        if len(elements) > cap:
            raise ClosureLimitExceeded(cap, len(elements))
        logger.debug(f"closure: {len(elements)} elements after adding {len(level)}")

    left = [[index[compose(f, z)] for z in elements] for f in gens]
    logger.info(f"generated semigroup of {len(elements)} elements on {n} points")
    return Semigroup(elements, list(range(len(gens))), left, parents)


def idempotents(S):
    """E(S) in canonical order."""
    return [z for z in S.elements if z.is_idempotent()]


def min_rank(S):
    return min(rank(z) for z in S.elements)


def kernel(S):
    """The minimal ideal, found as the set of minimal-rank elements.

    The ideal property is checked against the generators, which is enough
    because every element of S is a product of generators.
    """
    m = min_rank(S)
    K = [z for z in S.elements if rank(z) == m]
    members = set(K)
    for f in S.generator_maps:
        for z in K:
            if compose(f, z) not in members or compose(z, f) not in members:
                # rank can only drop and m is the minimum
                raise StructuralInconsistency(f"kernel is not an ideal at {f} and {z}")
    logger.info(f"kernel: {len(K)} elements of rank {m}")
    return K


def minimal_ideal_bruteforce(S):
    """Smallest two-sided ideal S^1 z S^1 over all z; cubic, small S only."""
    elements = S.elements
    best = None
    for z in elements:
        ideal = {z}
        ideal.update(compose(a, z) for a in elements)
        ideal.update(compose(z, b) for b in elements)
        ideal.update(compose(a, compose(z, b)) for a, b in cartesian(elements, elements))
        if best is None or len(ideal) < len(best):
            best = ideal
    return sorted(best, key=S.index.__getitem__)


def kernel_idempotent(S, K):
    """The idempotent e the decomposition is taken at: the first one of K in canonical order."""
    members = set(K)
    for z in S.elements:
        if z in members and z.is_idempotent():
            return z
    raise StructuralInconsistency("the kernel has no idempotent")
