# transforms/rees.py
"""Rees decomposition K = L G R of the kernel at an idempotent e.

L = E(Ke), G = eKe, R = E(eK). The product map L x G x R -> K is a bijection
and its inverse is z -> (ze(eze)^-1, eze, (eze)^-1 ez).

H, gamma, C and p are left empty here; limit analysis fills them in with
`with_cycle` once the period of the convolution powers is known.
"""
import logging
from dataclasses import dataclass, field, replace

from mapevo.exceptions import StructuralInconsistency, TransformationError
from .transformation import compose

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReesData:
    e: object
    L: tuple
    G: tuple
    R: tuple
    group_inverse: dict = field(repr=False)
    H: tuple = ()
    gamma: object = None
    C: tuple = ()
    p: int = 0
    coset_of: dict = field(default_factory=dict, repr=False)
    K: frozenset = field(default=frozenset(), repr=False)

    @property
    def group_unit(self):
        return self.e

    @property
    def has_cycle(self):
        return self.p > 0

    def inverse(self, g):
        try:
            return self.group_inverse[g]
        except KeyError:
            raise TransformationError(f"{g} is not in the group factor G") from None

    def project(self, z):
        """(z_L, z_G, z_R) with z = z_L z_G z_R."""
        if self.K and z not in self.K:
            raise TransformationError(f"{z} is not in the kernel")
        e = self.e
        ze = compose(z, e)
        eze = compose(e, ze)
        if eze not in self.group_inverse:
            raise TransformationError(f"{z} is not in the kernel")
        inv = self.group_inverse[eze]
        return compose(ze, inv), eze, compose(inv, compose(e, z))

    def gamma_power(self, k):
        """gamma^k for any integer k (exponents taken mod p)."""
        return self.C[k % self.p]

    def split(self, g):
        """(g_C, g_H) with g = g_C g_H, g_C in C and g_H in H."""
        j = self.coset_of[g]
        c = self.C[j]
        return c, compose(self.group_inverse[c], g)

    def coset_index(self, g):
        return self.coset_of[g]

    def with_cycle(self, H, gamma, p):
        C = [self.e]
        for _ in range(p - 1):
            C.append(compose(gamma, C[-1]))
        H = tuple(sorted(H))
        coset_of = {}
        for j, c in enumerate(C):
            for h in H:
                coset_of[compose(c, h)] = j
        return replace(self, H=H, gamma=gamma, C=tuple(C), p=p, coset_of=coset_of)


def element_order(g, e, bound):
    """Smallest k with g^k = e; bound + 1 if there is none up to bound."""
    k, power = 1, g
    while power != e and k <= bound:
        power = compose(g, power)
        k += 1
    return k


def group_inverses(G, e):
    """g^-1 = g^(ord(g)-1), with g^0 read as e."""
    inverses = {}
    bound = len(G)
    for g in G:
        order = element_order(g, e, bound)
        if order > bound:
            raise StructuralInconsistency(f"{g} has order {order} in a group of {bound} elements")
        inverses[g] = e if order == 1 else g.power(order - 1)
    return inverses


def rees_at(K, e):
    """Rees decomposition of the kernel K at the idempotent e (without H, gamma, p)."""
    members = set(K)
    if e not in members:
        raise TransformationError(f"{e} is not in the kernel")
    if not e.is_idempotent():
        raise TransformationError(f"{e} is not idempotent")

    Ke = {compose(z, e) for z in K}
    eK = {compose(e, z) for z in K}
    L = tuple(sorted(z for z in Ke if z.is_idempotent()))
    R = tuple(sorted(z for z in eK if z.is_idempotent()))
    G = tuple(sorted({compose(e, z) for z in Ke}))
    for g in G:
        if compose(g, e) != g or compose(e, g) != g:
            raise StructuralInconsistency(f"e is not a unit for {g}")
    for l in L:
        if compose(e, l) != e:
            raise StructuralInconsistency(f"eL != {{e}} at {l}")
    for r in R:
        if compose(r, e) != e:
            raise StructuralInconsistency(f"Re != {{e}} at {r}")

    rd = ReesData(e=e, L=L, G=G, R=R, group_inverse=group_inverses(G, e), K=frozenset(members))

    products = {}
    for l in L:
        for g in G:
            lg = compose(l, g)
            for r in R:
                z = compose(lg, r)
                if z in products or z not in members:
                    raise StructuralInconsistency(f"product L x G x R is not a bijection at {z}")
                products[z] = (l, g, r)
    if len(products) != len(members):
        raise StructuralInconsistency(
            f"|L||G||R| = {len(products)} but the kernel has {len(members)} elements")
    for z, triple in products.items():
        if rd.project(z) != triple:
            raise StructuralInconsistency(f"projection formula disagrees with the product at {z}")
    logger.info(f"Rees decomposition at {e}: |L|={len(L)} |G|={len(G)} |R|={len(R)}")
    return rd


def coset_structure(rd):
    """The cosets H, gamma H, ..., gamma^(p-1) H, after checking H is normal in G."""
    if not rd.has_cycle:
        raise StructuralInconsistency("H is not known yet")
    H = set(rd.H)
    G = set(rd.G)
    if rd.e not in H or not H <= G:
        raise StructuralInconsistency("H is not a subset of G containing e")
    for a in H:
        for b in H:
            if compose(a, b) not in H:
                raise StructuralInconsistency(f"H is not closed at {a}, {b}")
    for g in G:
        inv = rd.group_inverse[g]
        for h in H:
            if compose(inv, compose(h, g)) not in H:
                raise StructuralInconsistency(f"H is not normal: conjugate of {h} by {g}")
    cosets = [tuple(sorted(compose(c, h) for h in H)) for c in rd.C]
    covered = set()
    for coset in cosets:
        if covered & set(coset):
            raise StructuralInconsistency("cosets of H overlap")
        covered |= set(coset)
    if covered != G:
        raise StructuralInconsistency("cosets of H do not cover G")
    if rd.gamma.power(rd.p) != rd.e:
        raise StructuralInconsistency("gamma^p != e")
    return cosets
